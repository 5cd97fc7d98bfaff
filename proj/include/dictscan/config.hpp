#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "dictscan/corrector.hpp"
#include "dictscan/geometry.hpp"
#include "dictscan/hough.hpp"
#include "dictscan/lexicon.hpp"
#include "dictscan/ocr.hpp"

namespace dictscan {

enum class CropMode { automatic, manual, none };

enum class OcrBackendKind { tesseract, mock };

/// Every tunable of the pipeline. Defaults are the documented ones; a config
/// file or --set overrides them by dotted key (e.g. "hough.threshold").
struct PipelineConfig {
    int kernel_divisor = 40;

    CropMode crop_mode = CropMode::automatic;
    int crop_margin = 8;
    int crop_bridge = 2;
    std::optional<Rect> crop_manual;

    HoughParams hough;
    ConsolidateParams consolidate;
    double snap_tol = 4.0;

    bool correct = true;
    CorrectionConfig correction;
    LengthKey length_key = LengthKey::graphemes;

    OcrBackendKind ocr_backend = OcrBackendKind::tesseract;
    std::filesystem::path ocr_mock_fixture;
    OcrConfig ocr;

    int parallelism = 0;  // pages in flight; 0: logical CPU count

    /// Applies one key=value setting. Throws ConfigError on an unknown key or
    /// a malformed value.
    void set(const std::string& key, const std::string& value);

    /// Throws ConfigError when values are out of range or inconsistent.
    void validate() const;

    int effective_parallelism() const;
};

/// Flattened key → value pairs of an INI-style file. "[ocr]\nlanguages = x"
/// and "ocr.languages = x" are equivalent.
std::map<std::string, std::string> read_config_file(const std::filesystem::path& path);

PipelineConfig load_config(const std::filesystem::path& path);

}  // namespace dictscan
