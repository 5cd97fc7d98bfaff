#pragma once

#include <array>
#include <cstdint>
#include <optional>

#include "dictscan/image.hpp"

namespace dictscan {

/// Intensity histogram of an 8-bit image.
struct Histogram {
    std::array<std::uint64_t, kIntensityLevels> counts{};
    std::uint64_t total = 0;

    /// Normalized probability p(i) = n_i / N.
    double p(int i) const { return static_cast<double>(counts[i]) / static_cast<double>(total); }
};

struct OtsuResult {
    int threshold = 0;
    double between_class_variance = 0.0;
};

/// Class statistics for a candidate threshold t: background = intensities <= t.
struct ClassStats {
    double weight_bg = 0.0;
    double weight_fg = 0.0;
    double mean_bg = 0.0;
    double mean_fg = 0.0;
    double between_class_variance = 0.0;
};

struct StructuringElement {
    int width = 1;
    int height = 1;

    StructuringElement(int w, int h);
    StructuringElement(int w, int h, int anchor_x, int anchor_y);
    int anchor_x() const noexcept { return ax_; }
    int anchor_y() const noexcept { return ay_; }

    /// Point reflection through the anchor; the same element for odd sizes.
    StructuringElement reflected() const { return {width, height, width - 1 - ax_, height - 1 - ay_}; }

private:
    int ax_ = 0;
    int ay_ = 0;
};

enum class Orientation { horizontal, vertical };

enum class Polarity { ink_is_dark, ink_is_light };

Histogram compute_histogram(const GrayImage& img);

/// Class weights and means for threshold t. Empty classes get weight 0 and
/// mean 0, and between-class variance 0.
ClassStats class_stats(const Histogram& hist, int t);

/// Otsu's threshold over t in [0, 254]; the smallest maximizing t wins.
/// Throws DegenerateHistogram when every pixel has the same intensity.
OtsuResult otsu_threshold(const Histogram& hist);

BinaryImage binarize(const GrayImage& img, int t, Polarity polarity = Polarity::ink_is_dark);

// Rectangular all-ones element, anchored at (width/2, height/2) unless given.
// The window for output (x, y) spans x - anchor_x .. x - anchor_x + width - 1
// (same for rows), for both operations.
BinaryImage erode(const BinaryImage& img, const StructuringElement& se);
BinaryImage dilate(const BinaryImage& img, const StructuringElement& se);

BinaryImage complement(const BinaryImage& img);

/// Element length used by extract_line_mask: dimension / kernel_divisor.
int line_element_length(const BinaryImage& img, Orientation orientation, int kernel_divisor);

/// Opening with a 1-pixel-thick line element; only runs at least
/// line_element_length() long survive. Throws ElementTooSmall below 2.
BinaryImage extract_line_mask(const BinaryImage& img, Orientation orientation,
                              int kernel_divisor = 40);

struct CropOptions {
    int margin = 8;
    int bridge = 2;  // ink within this Chebyshev gap counts as connected
    std::optional<Rect> manual;
};

/// Bounding box of the largest 8-connected ink component (after Otsu
/// binarization), grown by the margin and clamped to the image. With
/// bridge > 0, components separated by at most bridge background pixels are
/// treated as one, so a rule broken by speckle still counts whole.
Rect find_crop_rect(const GrayImage& img, const CropOptions& options = {});

GrayImage auto_crop(const GrayImage& img, const CropOptions& options = {});

/// Integer BT.601 luma, (299 R + 587 G + 114 B + 500) / 1000.
std::uint8_t luma(std::uint8_t r, std::uint8_t g, std::uint8_t b) noexcept;

namespace reference {

// Straightforward serial kernels kept as test oracles and benchmark baselines.
Histogram compute_histogram(const GrayImage& img);
BinaryImage binarize(const GrayImage& img, int t, Polarity polarity);
BinaryImage erode(const BinaryImage& img, const StructuringElement& se);
BinaryImage dilate(const BinaryImage& img, const StructuringElement& se);

}  // namespace reference

}  // namespace dictscan
