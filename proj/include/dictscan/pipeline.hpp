#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dictscan/config.hpp"
#include "dictscan/corrector.hpp"
#include "dictscan/image.hpp"
#include "dictscan/ocr.hpp"
#include "dictscan/table_layout.hpp"

namespace dictscan {

/// Geometry of one page after cropping, binarization and deskew. All
/// coordinates are in the cropped, deskewed frame.
struct PageLayout {
    Rect crop;
    double skew = 0.0;  // estimated angle that was removed, radians
    std::optional<int> threshold;
    GrayImage page;
    BinaryImage binary;
    std::vector<LineSegment> h_edges;
    std::vector<LineSegment> v_edges;
    GridPoints grid;
    PageRegions regions;
};

PageLayout analyze_page(const GrayImage& img, const PipelineConfig& config);

struct TextRecord {
    Rect bbox;
    std::string raw_text;
    std::string corrected_text;
    std::optional<std::string> error;
};

struct CellRecord : TextRecord {
    int row = 0;
    int col = 0;
};

struct TableRecord {
    Rect bbox;
    int row_count = 0;
    int col_count = 0;
    std::vector<std::vector<CellRecord>> rows;
};

enum class BlockKind { above, below };

struct BlockRecord : TextRecord {
    BlockKind kind = BlockKind::above;
};

struct PageDocument {
    std::string source;
    double skew_correction = 0.0;
    Rect crop;
    std::optional<TableRecord> table;
    std::vector<BlockRecord> blocks;
};

/// OCR and (optionally) correction on top of analyze_page. corrector may be
/// null, in which case corrected_text repeats raw_text.
PageDocument extract_page(const GrayImage& img, std::string source, const PipelineConfig& config,
                          const OcrBackend& backend, const Corrector* corrector);

struct PageResult {
    std::string source;
    std::optional<PageDocument> document;
    std::string error;  // "<Kind>: message" when document is empty
};

/// Pages are processed independently, up to config.parallelism at a time.
/// Output order matches input order.
std::vector<PageResult> run_extract(const std::vector<std::filesystem::path>& images,
                                    const PipelineConfig& config, const OcrBackend& backend,
                                    const Corrector* corrector);

nlohmann::ordered_json to_json(const PageDocument& doc);

/// One "<stem>.json" per successful page plus manifest.json. Returns the
/// number of failed pages.
int write_extract_outputs(const std::vector<PageResult>& results, const std::filesystem::path& out_dir);

struct BuildLexiconSummary {
    std::uint64_t lines = 0;
    std::uint64_t words = 0;
    std::uint64_t clusters = 0;
    bool empty_vocabulary = false;
};

BuildLexiconSummary run_build_lexicon(const std::vector<std::filesystem::path>& vocab_files,
                                      const std::filesystem::path& out,
                                      const text::WeightTable& weights, LengthKey key);

/// Line-by-line correct_text; the trailing newline (or its absence) is kept.
void run_correct(std::istream& in, std::ostream& out, const Corrector& corrector);

}  // namespace dictscan
