#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dictscan/image.hpp"
#include "dictscan/table_layout.hpp"

namespace dictscan {

enum class RegionKind { table_cell, non_table_block };

struct OcrRequest {
    GrayImage region;
    RegionKind kind = RegionKind::non_table_block;
};

/// Defaults reproduce "-l vie+en --oem 1 --psm 6".
struct OcrConfig {
    std::vector<std::string> languages{"vie", "en"};
    int engine_mode = 1;
    int segmentation_mode = 6;
    double timeout_s = 30.0;
    int parallelism = 0;  // 0: logical CPU count
    int cell_margin_px = 2;
    std::string command = "tesseract";

    /// Engine arguments after the image path and output target.
    std::vector<std::string> engine_arguments() const;
    int effective_parallelism() const;
};

class OcrBackend {
public:
    virtual ~OcrBackend() = default;

    /// UTF-8 text for the region with trailing whitespace trimmed.
    virtual std::string recognize(const OcrRequest& request, const OcrConfig& config) const = 0;
};

/// Runs the engine as a subprocess per region: the region is written to a
/// temporary PNG and the text is read from standard output.
class ExternalOcrBackend final : public OcrBackend {
public:
    std::string recognize(const OcrRequest& request, const OcrConfig& config) const override;
};

/// Deterministic backend keyed by region_hash(). A fixture value of null
/// simulates an engine failure; unknown hashes yield empty text.
class MockOcrBackend final : public OcrBackend {
public:
    MockOcrBackend() = default;
    explicit MockOcrBackend(std::map<std::string, std::optional<std::string>> fixtures);

    /// JSON object mapping hash → text (or null).
    static MockOcrBackend load(const std::filesystem::path& path);

    std::string recognize(const OcrRequest& request, const OcrConfig& config) const override;

private:
    std::map<std::string, std::optional<std::string>> fixtures_;
};

/// 16 hex digits of FNV-1a 64 over the dimensions and pixels.
std::string region_hash(const GrayImage& region);

std::string trim_trailing_whitespace(std::string s);

/// Cell interior inset by margin pixels on every side; may be empty.
Rect cell_region(const Cell& cell, int margin, int page_width, int page_height);

struct CellText {
    Cell cell;
    std::string text;
    std::optional<std::string> error;
};

/// Recognizes cells independently (up to config.parallelism at a time).
/// Output order matches input order; failures are recorded per cell.
std::vector<CellText> recognize_cells(const GrayImage& page, std::span<const Cell> cells,
                                      const OcrBackend& backend, const OcrConfig& config);

}  // namespace dictscan
