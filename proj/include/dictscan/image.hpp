#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

namespace dictscan {

/// Axis-aligned pixel rectangle, half-open: [x, x+width) × [y, y+height).
struct Rect {
    int x = 0;
    int y = 0;
    int width = 0;
    int height = 0;

    bool empty() const noexcept { return width <= 0 || height <= 0; }
    int right() const noexcept { return x + width; }
    int bottom() const noexcept { return y + height; }
    bool operator==(const Rect&) const = default;
};

/// Clamp a rectangle to [0,w) × [0,h). The result may be empty.
inline Rect clamp(Rect r, int w, int h) {
    const int x0 = std::clamp(r.x, 0, w);
    const int y0 = std::clamp(r.y, 0, h);
    const int x1 = std::clamp(r.right(), 0, w);
    const int y1 = std::clamp(r.bottom(), 0, h);
    return {x0, y0, std::max(0, x1 - x0), std::max(0, y1 - y0)};
}

struct GrayTag {};
struct BinaryTag {};

/// Row-major 8-bit raster. The tag distinguishes intensity images
/// (values 0..255) from binary masks (values 0/1, 1 = ink).
template <typename Tag>
class Raster {
public:
    static constexpr bool is_binary = std::is_same_v<Tag, BinaryTag>;

    Raster() = default;

    Raster(int width, int height, std::uint8_t fill = 0)
        : width_(checked_dim(width)), height_(checked_dim(height)),
          data_(static_cast<std::size_t>(width_) * height_, fill) {
        if constexpr (is_binary) {
            if (fill > 1) throw std::invalid_argument("binary raster fill must be 0 or 1");
        }
    }

    Raster(int width, int height, std::vector<std::uint8_t> data)
        : width_(checked_dim(width)), height_(checked_dim(height)), data_(std::move(data)) {
        if (data_.size() != static_cast<std::size_t>(width_) * height_)
            throw std::invalid_argument("raster data length " + std::to_string(data_.size()) +
                                        " != " + std::to_string(width_) + "x" +
                                        std::to_string(height_));
        if constexpr (is_binary) {
            if (std::any_of(data_.begin(), data_.end(), [](std::uint8_t v) { return v > 1; }))
                throw std::invalid_argument("binary raster holds a value other than 0/1");
        }
    }

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }
    bool contains(int x, int y) const noexcept {
        return x >= 0 && y >= 0 && x < width_ && y < height_;
    }

    std::uint8_t at(int x, int y) const { return data_[index(x, y)]; }
    std::uint8_t& at(int x, int y) { return data_[index(x, y)]; }

    std::span<const std::uint8_t> row(int y) const {
        return {data_.data() + static_cast<std::size_t>(y) * width_,
                static_cast<std::size_t>(width_)};
    }
    std::span<std::uint8_t> row(int y) {
        return {data_.data() + static_cast<std::size_t>(y) * width_,
                static_cast<std::size_t>(width_)};
    }

    std::span<const std::uint8_t> pixels() const noexcept { return data_; }
    std::span<std::uint8_t> pixels() noexcept { return data_; }

    /// Copy of the sub-image r ∩ bounds.
    Raster crop(Rect r) const {
        r = clamp(r, width_, height_);
        Raster out(r.width, r.height);
        for (int y = 0; y < r.height; ++y) {
            auto src = row(r.y + y).subspan(static_cast<std::size_t>(r.x),
                                            static_cast<std::size_t>(r.width));
            std::copy(src.begin(), src.end(), out.row(y).begin());
        }
        return out;
    }

    bool operator==(const Raster&) const = default;

private:
    static int checked_dim(int v) {
        if (v < 0) throw std::invalid_argument("negative raster dimension");
        return v;
    }
    std::size_t index(int x, int y) const noexcept {
        return static_cast<std::size_t>(y) * width_ + x;
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> data_;
};

using GrayImage = Raster<GrayTag>;
using BinaryImage = Raster<BinaryTag>;

constexpr int kIntensityLevels = 256;

}  // namespace dictscan
