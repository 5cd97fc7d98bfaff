#include "dictscan/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <sstream>
#include <thread>

#include "dictscan/error.hpp"

namespace dictscan {

namespace {

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
    T out{};
    const char* first = value.data();
    const char* last = value.data() + value.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc{} || ptr != last)
        throw ConfigError("config key '" + key + "': '" + value + "' is not a valid number");
    return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
    if (value == "false" || value == "0" || value == "no" || value == "off") return false;
    throw ConfigError("config key '" + key + "': '" + value + "' is not a boolean");
}

Rect parse_rect(const std::string& key, const std::string& value) {
    std::stringstream ss(value);
    std::string part;
    int v[4];
    int i = 0;
    while (std::getline(ss, part, ',')) {
        if (i == 4) break;
        const auto b = part.find_first_not_of(' ');
        const auto e = part.find_last_not_of(' ');
        v[i++] = parse_number<int>(key, b == std::string::npos ? "" : part.substr(b, e - b + 1));
    }
    if (i != 4 || ss.rdbuf()->in_avail() > 0)
        throw ConfigError("config key '" + key + "': expected x,y,width,height");
    return {v[0], v[1], v[2], v[3]};
}

}  // namespace

void PipelineConfig::set(const std::string& key, const std::string& value) {
    if (key == "imaging.kernel_divisor") kernel_divisor = parse_number<int>(key, value);
    else if (key == "crop.mode") {
        if (value == "auto") crop_mode = CropMode::automatic;
        else if (value == "manual") crop_mode = CropMode::manual;
        else if (value == "none") crop_mode = CropMode::none;
        else throw ConfigError("crop.mode must be auto, manual or none");
    } else if (key == "crop.margin") crop_margin = parse_number<int>(key, value);
    else if (key == "crop.bridge") crop_bridge = parse_number<int>(key, value);
    else if (key == "crop.manual") {
        crop_manual = parse_rect(key, value);
        crop_mode = CropMode::manual;
    } else if (key == "hough.rho") hough.rho = parse_number<double>(key, value);
    else if (key == "hough.theta_deg") hough.theta_deg = parse_number<double>(key, value);
    else if (key == "hough.angle_tolerance_deg") hough.angle_tolerance_deg = parse_number<double>(key, value);
    else if (key == "hough.threshold") hough.threshold = parse_number<int>(key, value);
    else if (key == "hough.min_length") hough.min_length = parse_number<int>(key, value);
    else if (key == "hough.max_gap") hough.max_gap = parse_number<int>(key, value);
    else if (key == "hough.band") hough.band = parse_number<int>(key, value);
    else if (key == "hough.seed") hough.seed = parse_number<std::uint64_t>(key, value);
    else if (key == "consolidate.gap_tol") consolidate.gap_tol = parse_number<double>(key, value);
    else if (key == "consolidate.offset_tol") consolidate.offset_tol = parse_number<double>(key, value);
    else if (key == "grid.snap_tol") snap_tol = parse_number<double>(key, value);
    else if (key == "correct.enabled") correct = parse_bool(key, value);
    else if (key == "correct.thres") correction.thres = parse_number<std::uint64_t>(key, value);
    else if (key == "correct.min_window") correction.min_window = parse_number<int>(key, value);
    else if (key == "correct.max_window") correction.max_window = parse_number<int>(key, value);
    else if (key == "lexicon.length_key") {
        try {
            length_key = parse_length_key(value);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
    } else if (key == "ocr.backend") {
        if (value == "tesseract") ocr_backend = OcrBackendKind::tesseract;
        else if (value == "mock") ocr_backend = OcrBackendKind::mock;
        else throw ConfigError("ocr.backend must be tesseract or mock");
    } else if (key == "ocr.mock_fixture") ocr_mock_fixture = value;
    else if (key == "ocr.command") ocr.command = value;
    else if (key == "ocr.languages") {
        ocr.languages.clear();
        std::stringstream ss(value);
        std::string lang;
        while (std::getline(ss, lang, '+'))
            if (!lang.empty()) ocr.languages.push_back(lang);
    } else if (key == "ocr.engine_mode") ocr.engine_mode = parse_number<int>(key, value);
    else if (key == "ocr.segmentation_mode") ocr.segmentation_mode = parse_number<int>(key, value);
    else if (key == "ocr.timeout_s") ocr.timeout_s = parse_number<double>(key, value);
    else if (key == "ocr.parallelism") ocr.parallelism = parse_number<int>(key, value);
    else if (key == "ocr.cell_margin_px") ocr.cell_margin_px = parse_number<int>(key, value);
    else if (key == "pipeline.parallelism") parallelism = parse_number<int>(key, value);
    else throw ConfigError("unknown config key '" + key + "'");
}

void PipelineConfig::validate() const {
    auto require = [](bool ok, const char* what) {
        if (!ok) throw ConfigError(what);
    };
    require(kernel_divisor >= 1, "imaging.kernel_divisor must be >= 1");
    require(crop_margin >= 0, "crop.margin must be >= 0");
    require(crop_bridge >= 0, "crop.bridge must be >= 0");
    require(crop_mode != CropMode::manual || (crop_manual && !crop_manual->empty()),
            "crop.mode = manual needs a non-empty crop.manual rectangle");
    require(hough.rho > 0 && hough.theta_deg > 0, "hough resolutions must be positive");
    require(hough.angle_tolerance_deg >= 0 && hough.angle_tolerance_deg < 45,
            "hough.angle_tolerance_deg must be in [0, 45)");
    require(hough.threshold >= 1 && hough.min_length >= 0 && hough.max_gap >= 0 && hough.band >= 0,
            "hough threshold/min_length/max_gap/band out of range");
    require(consolidate.gap_tol >= 0 && consolidate.offset_tol >= 0,
            "consolidate tolerances must be >= 0");
    require(snap_tol >= 0, "grid.snap_tol must be >= 0");
    try {
        correction.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    require(!ocr.languages.empty(), "ocr.languages is empty");
    require(ocr.timeout_s > 0, "ocr.timeout_s must be positive");
    require(ocr.parallelism >= 0 && parallelism >= 0, "parallelism must be >= 0");
    require(ocr.cell_margin_px >= 0, "ocr.cell_margin_px must be >= 0");
    require(ocr_backend != OcrBackendKind::mock || !ocr_mock_fixture.empty(),
            "ocr.backend = mock needs ocr.mock_fixture");
}

int PipelineConfig::effective_parallelism() const {
    if (parallelism > 0) return parallelism;
    return std::max(1u, std::thread::hardware_concurrency());
}

std::map<std::string, std::string> read_config_file(const std::filesystem::path& path) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    try {
        pt::read_ini(path.string(), tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(e.what());
    }
    std::map<std::string, std::string> flat;
    for (const auto& [key, node] : tree) {
        if (node.empty()) {
            flat[key] = node.data();
        } else {
            for (const auto& [sub, leaf] : node) flat[key + "." + sub] = leaf.data();
        }
    }
    return flat;
}

PipelineConfig load_config(const std::filesystem::path& path) {
    PipelineConfig cfg;
    for (const auto& [key, value] : read_config_file(path)) cfg.set(key, value);
    cfg.validate();
    return cfg;
}

}  // namespace dictscan
