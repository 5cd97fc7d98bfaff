#include "dictscan/imaging.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <numeric>
#include <stdexcept>
#include <vector>

#include "dictscan/error.hpp"

namespace dictscan {

namespace mp = boost::multiprecision;

StructuringElement::StructuringElement(int w, int h) : StructuringElement(w, h, w / 2, h / 2) {}

StructuringElement::StructuringElement(int w, int h, int anchor_x, int anchor_y)
    : width(w), height(h), ax_(anchor_x), ay_(anchor_y) {
    if (w < 1 || h < 1) throw std::invalid_argument("structuring element must be at least 1x1");
    if (anchor_x < 0 || anchor_x >= w || anchor_y < 0 || anchor_y >= h)
        throw std::invalid_argument("structuring element anchor outside the element");
}

std::uint8_t luma(std::uint8_t r, std::uint8_t g, std::uint8_t b) noexcept {
    return static_cast<std::uint8_t>((299u * r + 587u * g + 114u * b + 500u) / 1000u);
}

Histogram compute_histogram(const GrayImage& img) {
    if (img.empty()) throw EmptyImage("cannot build a histogram of an empty image");
    Histogram hist;
    std::uint64_t* counts = hist.counts.data();
    const auto px = img.pixels();
    const auto n = static_cast<std::ptrdiff_t>(px.size());
#pragma omp parallel for reduction(+ : counts[:kIntensityLevels]) schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) counts[px[i]] += 1;
    hist.total = px.size();
    return hist;
}

ClassStats class_stats(const Histogram& hist, int t) {
    ClassStats s;
    double mass_bg = 0.0;
    double mass_fg = 0.0;
    for (int i = 0; i < kIntensityLevels; ++i) {
        const double p = hist.p(i);
        if (i <= t) {
            s.weight_bg += p;
            mass_bg += i * p;
        } else {
            s.weight_fg += p;
            mass_fg += i * p;
        }
    }
    if (s.weight_bg > 0.0) s.mean_bg = mass_bg / s.weight_bg;
    if (s.weight_fg > 0.0) s.mean_fg = mass_fg / s.weight_fg;
    if (s.weight_bg > 0.0 && s.weight_fg > 0.0) {
        const double d = s.mean_bg - s.mean_fg;
        s.between_class_variance = s.weight_bg * s.weight_fg * d * d;
    }
    return s;
}

OtsuResult otsu_threshold(const Histogram& hist) {
    if (hist.total == 0) throw EmptyImage("histogram has no pixels");
    const int occupied = static_cast<int>(
        std::count_if(hist.counts.begin(), hist.counts.end(), [](auto c) { return c > 0; }));
    if (occupied < 2) throw DegenerateHistogram("all pixels share one intensity");

    // sigma_b^2(t) = (S_bg N - S n_bg)^2 / (N^2 n_bg n_fg). The argmax is taken
    // over exact integers; ties go to the smallest t.
    const mp::cpp_int total = hist.total;
    mp::cpp_int mass = 0;
    for (int i = 0; i < kIntensityLevels; ++i) mass += mp::cpp_int(hist.counts[i]) * i;

    mp::cpp_int n_bg = 0;
    mp::cpp_int s_bg = 0;
    mp::cpp_int best_num = 0;
    mp::cpp_int best_den = 1;
    int best_t = -1;
    for (int t = 0; t <= kIntensityLevels - 2; ++t) {
        n_bg += hist.counts[t];
        s_bg += mp::cpp_int(hist.counts[t]) * t;
        const mp::cpp_int n_fg = total - n_bg;
        if (n_bg == 0 || n_fg == 0) continue;
        const mp::cpp_int d = s_bg * total - mass * n_bg;
        const mp::cpp_int num = d * d;
        const mp::cpp_int den = n_bg * n_fg;
        if (best_t < 0 || num * best_den > best_num * den) {
            best_num = num;
            best_den = den;
            best_t = t;
        }
    }

    OtsuResult result;
    result.threshold = best_t;
    result.between_class_variance =
        mp::cpp_rational(best_num, total * total * best_den).convert_to<double>();
    return result;
}

BinaryImage binarize(const GrayImage& img, int t, Polarity polarity) {
    if (t < 0 || t > kIntensityLevels - 2) throw std::invalid_argument("threshold out of [0, 254]");
    BinaryImage out(img.width(), img.height());
    const auto src = img.pixels();
    auto dst = out.pixels();
    const auto n = static_cast<std::ptrdiff_t>(src.size());
    const std::uint8_t ink_le = polarity == Polarity::ink_is_dark ? 1 : 0;
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) dst[i] = src[i] <= t ? ink_le : 1 - ink_le;
    return out;
}

namespace {

// One-dimensional window pass along rows (horizontal) or columns. For erode
// the output is 1 iff the whole window is in bounds and all ones; for dilate
// iff any in-bounds window pixel is one.
enum class MorphOp { erode, dilate };

BinaryImage morph_rows(const BinaryImage& img, int length, int anchor, MorphOp op) {
    const int w = img.width();
    const int h = img.height();
    BinaryImage out(w, h);
    if (length == 1) return img;
#pragma omp parallel for schedule(static)
    for (int y = 0; y < h; ++y) {
        const auto src = img.row(y);
        auto dst = out.row(y);
        std::vector<int> prefix(static_cast<std::size_t>(w) + 1, 0);
        for (int x = 0; x < w; ++x) prefix[x + 1] = prefix[x] + src[x];
        for (int x = 0; x < w; ++x) {
            const int lo = x - anchor;
            const int hi = lo + length;  // exclusive
            if (op == MorphOp::erode) {
                dst[x] = (lo >= 0 && hi <= w && prefix[hi] - prefix[lo] == length) ? 1 : 0;
            } else {
                const int a = std::max(lo, 0);
                const int b = std::min(hi, w);
                dst[x] = (a < b && prefix[b] - prefix[a] > 0) ? 1 : 0;
            }
        }
    }
    return out;
}

BinaryImage morph_cols(const BinaryImage& img, int length, int anchor, MorphOp op) {
    const int w = img.width();
    const int h = img.height();
    if (length == 1) return img;
    // Column prefix sums, row-major: prefix[(y) * w + x] = sum of rows < y.
    std::vector<int> prefix(static_cast<std::size_t>(h + 1) * w, 0);
    for (int y = 0; y < h; ++y) {
        const auto src = img.row(y);
        const int* prev = prefix.data() + static_cast<std::size_t>(y) * w;
        int* next = prefix.data() + static_cast<std::size_t>(y + 1) * w;
        for (int x = 0; x < w; ++x) next[x] = prev[x] + src[x];
    }
    BinaryImage out(w, h);
#pragma omp parallel for schedule(static)
    for (int y = 0; y < h; ++y) {
        auto dst = out.row(y);
        const int lo = y - anchor;
        const int hi = lo + length;
        if (op == MorphOp::erode) {
            if (lo < 0 || hi > h) continue;
            const int* a = prefix.data() + static_cast<std::size_t>(lo) * w;
            const int* b = prefix.data() + static_cast<std::size_t>(hi) * w;
            for (int x = 0; x < w; ++x) dst[x] = (b[x] - a[x] == length) ? 1 : 0;
        } else {
            const int* a = prefix.data() + static_cast<std::size_t>(std::max(lo, 0)) * w;
            const int* b = prefix.data() + static_cast<std::size_t>(std::min(hi, h)) * w;
            for (int x = 0; x < w; ++x) dst[x] = (b[x] - a[x] > 0) ? 1 : 0;
        }
    }
    return out;
}

}  // namespace

BinaryImage erode(const BinaryImage& img, const StructuringElement& se) {
    if (se.width > img.width() || se.height > img.height())
        return BinaryImage(img.width(), img.height());
    return morph_cols(morph_rows(img, se.width, se.anchor_x(), MorphOp::erode), se.height,
                      se.anchor_y(), MorphOp::erode);
}

BinaryImage dilate(const BinaryImage& img, const StructuringElement& se) {
    return morph_cols(morph_rows(img, se.width, se.anchor_x(), MorphOp::dilate), se.height,
                      se.anchor_y(), MorphOp::dilate);
}

BinaryImage complement(const BinaryImage& img) {
    BinaryImage out(img.width(), img.height());
    const auto src = img.pixels();
    auto dst = out.pixels();
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] = 1 - src[i];
    return out;
}

int line_element_length(const BinaryImage& img, Orientation orientation, int kernel_divisor) {
    if (kernel_divisor < 1) throw std::invalid_argument("kernel divisor must be positive");
    const int dim = orientation == Orientation::horizontal ? img.width() : img.height();
    return dim / kernel_divisor;
}

BinaryImage extract_line_mask(const BinaryImage& img, Orientation orientation,
                              int kernel_divisor) {
    const int length = line_element_length(img, orientation, kernel_divisor);
    if (length < 2)
        throw ElementTooSmall("line element length " + std::to_string(length) +
                              " is below 2; image too small for line extraction");
    const StructuringElement se = orientation == Orientation::horizontal
                                      ? StructuringElement(length, 1)
                                      : StructuringElement(1, length);
    return dilate(erode(img, se), se.reflected());
}

namespace {

BinaryImage binarize_for_crop(const GrayImage& img) {
    const Histogram hist = compute_histogram(img);
    try {
        return binarize(img, otsu_threshold(hist).threshold, Polarity::ink_is_dark);
    } catch (const DegenerateHistogram&) {
        const std::uint8_t v = img.pixels().front();
        return BinaryImage(img.width(), img.height(), v <= 127 ? 1 : 0);
    }
}

struct DisjointSet {
    std::vector<int> parent;
    explicit DisjointSet(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

}  // namespace

Rect find_crop_rect(const GrayImage& img, const CropOptions& options) {
    if (img.empty()) throw EmptyImage("cannot crop an empty image");
    if (options.manual) {
        const Rect r = clamp(*options.manual, img.width(), img.height());
        if (r.empty()) throw std::invalid_argument("manual crop rectangle lies outside the image");
        return r;
    }
    const BinaryImage bin = binarize_for_crop(img);
    const int w = bin.width();
    const int h = bin.height();
    const int b = std::max(0, options.bridge);
    const BinaryImage link = b > 0 ? dilate(bin, StructuringElement(2 * b + 1, 2 * b + 1)) : bin;

    // Two-pass 8-connected labelling of the bridged image; sizes and extents
    // below count only the original ink.
    DisjointSet sets(bin.size());
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (!link.at(x, y)) continue;
            const int idx = y * w + x;
            if (x > 0 && link.at(x - 1, y)) sets.unite(idx, idx - 1);
            if (y > 0) {
                for (int dx = -1; dx <= 1; ++dx) {
                    const int nx = x + dx;
                    if (nx >= 0 && nx < w && link.at(nx, y - 1)) sets.unite(idx, (y - 1) * w + nx);
                }
            }
        }
    }
    std::vector<std::uint32_t> area(bin.size(), 0);
    int best_root = -1;
    for (int i = 0; i < static_cast<int>(bin.size()); ++i) {
        if (!bin.pixels()[i]) continue;
        const int root = sets.find(i);
        ++area[root];
        if (best_root < 0 || area[root] > area[best_root] ||
            (area[root] == area[best_root] && root < best_root))
            best_root = root;
    }
    if (best_root < 0) throw NoContent("no foreground pixels to crop around");

    int x0 = w, y0 = h, x1 = -1, y1 = -1;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (bin.at(x, y) && sets.find(y * w + x) == best_root) {
                x0 = std::min(x0, x);
                y0 = std::min(y0, y);
                x1 = std::max(x1, x);
                y1 = std::max(y1, y);
            }
        }
    }
    const int m = std::max(0, options.margin);
    return clamp({x0 - m, y0 - m, x1 - x0 + 1 + 2 * m, y1 - y0 + 1 + 2 * m}, w, h);
}

GrayImage auto_crop(const GrayImage& img, const CropOptions& options) {
    return img.crop(find_crop_rect(img, options));
}

}  // namespace dictscan
