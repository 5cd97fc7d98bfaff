#include "dictscan/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

#include "dictscan/error.hpp"
#include "dictscan/geometry.hpp"
#include "dictscan/hough.hpp"
#include "dictscan/image_io.hpp"
#include "dictscan/imaging.hpp"

namespace dictscan {

namespace {

Rect choose_crop(const GrayImage& img, const PipelineConfig& config) {
    const Rect full{0, 0, img.width(), img.height()};
    switch (config.crop_mode) {
    case CropMode::none:
        return full;
    case CropMode::manual: {
        const Rect r = clamp(config.crop_manual.value_or(full), img.width(), img.height());
        if (r.empty()) throw InputError("crop.manual lies outside the image");
        return r;
    }
    case CropMode::automatic:
        try {
            return find_crop_rect(img, {config.crop_margin, config.crop_bridge, std::nullopt});
        } catch (const NoContent&) {
            return full;
        }
    }
    return full;
}

BinaryImage binarize_page(const GrayImage& gray, std::optional<int>& threshold) {
    try {
        const OtsuResult otsu = otsu_threshold(compute_histogram(gray));
        threshold = otsu.threshold;
        return binarize(gray, otsu.threshold);
    } catch (const DegenerateHistogram&) {
        threshold.reset();
        return BinaryImage(gray.width(), gray.height(), gray.pixels().front() <= 127 ? 1 : 0);
    }
}

std::vector<LineSegment> detect_edges(const BinaryImage& bin, Orientation orientation,
                                      const PipelineConfig& config, BinaryImage* mask_out = nullptr) {
    BinaryImage mask = extract_line_mask(bin, orientation, config.kernel_divisor);
    HoughParams params = config.hough;
    if (params.min_length == 0)
        params.min_length = line_element_length(bin, orientation, config.kernel_divisor);
    const auto segments = detect_segments(mask, orientation, params);
    if (mask_out) *mask_out = std::move(mask);
    return consolidate(segments, orientation, config.consolidate);
}

double round_to(double v, double scale) {
    const double r = std::round(v * scale) / scale;
    return r == 0.0 ? 0.0 : r;
}

Rect cell_bbox(const Cell& c) {
    const int x0 = static_cast<int>(std::lround(c.top_left.x));
    const int y0 = static_cast<int>(std::lround(c.top_left.y));
    const int x1 = static_cast<int>(std::lround(c.bottom_right.x));
    const int y1 = static_cast<int>(std::lround(c.bottom_right.y));
    return {x0, y0, x1 - x0 + 1, y1 - y0 + 1};
}

nlohmann::ordered_json rect_json(const Rect& r) {
    return {{"x", r.x}, {"y", r.y}, {"width", r.width}, {"height", r.height}};
}

void put_text(nlohmann::ordered_json& j, const TextRecord& r) {
    j["bbox"] = rect_json(r.bbox);
    j["raw_text"] = r.raw_text;
    j["corrected_text"] = r.corrected_text;
    if (r.error) j["error"] = *r.error;
}

}  // namespace

PageLayout analyze_page(const GrayImage& img, const PipelineConfig& config) {
    if (img.empty()) throw EmptyImage("page has no pixels");
    PageLayout layout;
    layout.crop = choose_crop(img, config);
    layout.page = img.crop(layout.crop);
    layout.binary = binarize_page(layout.page, layout.threshold);

    layout.h_edges = detect_edges(layout.binary, Orientation::horizontal, config);
    BinaryImage v_mask;
    layout.v_edges = detect_edges(layout.binary, Orientation::vertical, config, &v_mask);

    if (!layout.v_edges.empty()) {
        const auto longest = std::max_element(
            layout.v_edges.begin(), layout.v_edges.end(),
            [](const LineSegment& a, const LineSegment& b) { return a.length() < b.length(); });
        const LineSegment reference =
            refine_segment(v_mask, *longest, Orientation::vertical, config.consolidate.offset_tol);
        layout.skew = skew_angle(reference).theta;
    }
    if (layout.skew != 0.0) {
        layout.page = rotate(layout.page, -layout.skew);
        layout.binary = rotate(layout.binary, -layout.skew, BinaryResample::any_neighbour);
        layout.h_edges = detect_edges(layout.binary, Orientation::horizontal, config);
        layout.v_edges = detect_edges(layout.binary, Orientation::vertical, config);
    }

    const int w = layout.page.width();
    const int h = layout.page.height();
    layout.grid = build_grid(layout.h_edges, layout.v_edges, config.snap_tol, w, h);
    const auto cells = assign_row_col(detect_cells(layout.grid), config.snap_tol);
    layout.regions = split_regions(h, cells);
    return layout;
}

PageDocument extract_page(const GrayImage& img, std::string source, const PipelineConfig& config,
                          const OcrBackend& backend, const Corrector* corrector) {
    const PageLayout layout = analyze_page(img, config);
    PageDocument doc;
    doc.source = std::move(source);
    doc.skew_correction = layout.skew;
    doc.crop = layout.crop;

    auto finish = [&](TextRecord& r) {
        if (corrector && config.correct && !r.error)
            r.corrected_text = corrector->correct_text(r.raw_text);
        else
            r.corrected_text = r.raw_text;
    };

    const auto& cells = layout.regions.cells;
    if (!cells.empty()) {
        TableRecord table;
        const auto texts = recognize_cells(layout.page, cells, backend, config.ocr);
        int x0 = layout.page.width(), y0 = layout.page.height(), x1 = 0, y1 = 0;
        for (const CellText& t : texts) {
            CellRecord rec;
            rec.bbox = cell_bbox(t.cell);
            rec.row = t.cell.row_index;
            rec.col = t.cell.col_index;
            rec.raw_text = t.text;
            rec.error = t.error;
            finish(rec);
            x0 = std::min(x0, rec.bbox.x);
            y0 = std::min(y0, rec.bbox.y);
            x1 = std::max(x1, rec.bbox.right());
            y1 = std::max(y1, rec.bbox.bottom());
            table.row_count = std::max(table.row_count, rec.row + 1);
            table.col_count = std::max(table.col_count, rec.col + 1);
            if (static_cast<int>(table.rows.size()) < table.row_count) table.rows.resize(table.row_count);
            table.rows[rec.row].push_back(std::move(rec));
        }
        for (auto& row : table.rows)
            std::stable_sort(row.begin(), row.end(),
                             [](const CellRecord& a, const CellRecord& b) { return a.col < b.col; });
        table.bbox = {x0, y0, x1 - x0, y1 - y0};
        doc.table = std::move(table);
    }

    auto add_block = [&](const std::optional<RowRange>& range, BlockKind kind) {
        if (!range) return;
        BlockRecord block;
        block.kind = kind;
        block.bbox = {0, range->first, layout.page.width(), range->height()};
        try {
            block.raw_text = backend.recognize(
                {layout.page.crop(block.bbox), RegionKind::non_table_block}, config.ocr);
        } catch (const std::exception& e) {
            block.error = describe(e);
        }
        finish(block);
        doc.blocks.push_back(std::move(block));
    };
    add_block(layout.regions.above, BlockKind::above);
    add_block(layout.regions.below, BlockKind::below);
    return doc;
}

std::vector<PageResult> run_extract(const std::vector<std::filesystem::path>& images,
                                    const PipelineConfig& config, const OcrBackend& backend,
                                    const Corrector* corrector) {
    std::vector<PageResult> results(images.size());
    const auto n = static_cast<std::ptrdiff_t>(images.size());
#pragma omp parallel for schedule(dynamic) num_threads(config.effective_parallelism())
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        PageResult& r = results[static_cast<std::size_t>(i)];
        r.source = images[static_cast<std::size_t>(i)].string();
        try {
            GrayImage img;
            try {
                img = load_image(images[static_cast<std::size_t>(i)]);
            } catch (const Error& e) {
                throw InputError(e.what());
            }
            r.document = extract_page(img, r.source, config, backend, corrector);
        } catch (const std::exception& e) {
            r.error = describe(e);
        }
    }
    return results;
}

nlohmann::ordered_json to_json(const PageDocument& doc) {
    nlohmann::ordered_json j;
    j["source"] = doc.source;
    j["skew_correction"] = round_to(doc.skew_correction, 1000.0);
    j["crop"] = rect_json(doc.crop);
    if (doc.table) {
        nlohmann::ordered_json t;
        t["bbox"] = rect_json(doc.table->bbox);
        t["row_count"] = doc.table->row_count;
        t["col_count"] = doc.table->col_count;
        t["rows"] = nlohmann::ordered_json::array();
        for (const auto& row : doc.table->rows) {
            auto jr = nlohmann::ordered_json::array();
            for (const CellRecord& c : row) {
                nlohmann::ordered_json jc;
                jc["row"] = c.row;
                jc["col"] = c.col;
                put_text(jc, c);
                jr.push_back(std::move(jc));
            }
            t["rows"].push_back(std::move(jr));
        }
        j["table"] = std::move(t);
    } else {
        j["table"] = nullptr;
    }
    j["blocks"] = nlohmann::ordered_json::array();
    for (const BlockRecord& b : doc.blocks) {
        nlohmann::ordered_json jb;
        jb["kind"] = b.kind == BlockKind::above ? "above" : "below";
        put_text(jb, b);
        j["blocks"].push_back(std::move(jb));
    }
    return j;
}

int write_extract_outputs(const std::vector<PageResult>& results, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    std::map<std::string, int> used{{"manifest", 1}};
    nlohmann::ordered_json manifest;
    manifest["pages"] = nlohmann::ordered_json::array();
    int failed = 0;
    for (const PageResult& r : results) {
        nlohmann::ordered_json entry;
        entry["source"] = r.source;
        if (r.document) {
            std::string stem = std::filesystem::path(r.source).stem().string();
            const int seen = used[stem]++;
            if (seen > 0) stem += "-" + std::to_string(seen + 1);
            const std::string name = stem + ".json";
            std::ofstream out(out_dir / name, std::ios::binary);
            out << to_json(*r.document).dump(2) << '\n';
            if (!out) throw InputError("cannot write " + (out_dir / name).string());
            entry["status"] = "ok";
            entry["output"] = name;
        } else {
            ++failed;
            entry["status"] = "failed";
            entry["error"] = r.error;
        }
        manifest["pages"].push_back(std::move(entry));
    }
    manifest["succeeded"] = static_cast<int>(results.size()) - failed;
    manifest["failed"] = failed;
    std::ofstream out(out_dir / "manifest.json", std::ios::binary);
    out << manifest.dump(2) << '\n';
    if (!out) throw InputError("cannot write " + (out_dir / "manifest.json").string());
    return failed;
}

BuildLexiconSummary run_build_lexicon(const std::vector<std::filesystem::path>& vocab_files,
                                      const std::filesystem::path& out,
                                      const text::WeightTable& weights, LengthKey key) {
    BuildLexiconSummary summary;
    VocabStack stack;
    for (const auto& path : vocab_files) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw InputError("cannot read " + path.string());
        std::string line;
        while (std::getline(in, line)) {
            ++summary.lines;
            auto words = normalize_entry(line, weights);
            stack.insert(stack.end(), std::make_move_iterator(words.begin()),
                         std::make_move_iterator(words.end()));
        }
    }
    const Lexicon lex = Lexicon::build(stack, weights, key);
    save_lexicon(lex, out);
    summary.words = lex.word_count();
    summary.clusters = lex.clusters().size();
    summary.empty_vocabulary = summary.words == 0;
    return summary;
}

void run_correct(std::istream& in, std::ostream& out, const Corrector& corrector) {
    std::string line;
    while (std::getline(in, line)) {
        out << corrector.correct_text(line);
        if (!in.eof()) out << '\n';
    }
}

}  // namespace dictscan
