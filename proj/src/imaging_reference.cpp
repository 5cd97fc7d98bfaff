#include <stdexcept>

#include "dictscan/error.hpp"
#include "dictscan/imaging.hpp"

namespace dictscan::reference {

Histogram compute_histogram(const GrayImage& img) {
    if (img.empty()) throw EmptyImage("cannot build a histogram of an empty image");
    Histogram hist;
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x) ++hist.counts[img.at(x, y)];
    hist.total = static_cast<std::uint64_t>(img.width()) * img.height();
    return hist;
}

BinaryImage binarize(const GrayImage& img, int t, Polarity polarity) {
    if (t < 0 || t > kIntensityLevels - 2) throw std::invalid_argument("threshold out of [0, 254]");
    BinaryImage out(img.width(), img.height());
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            const bool dark = img.at(x, y) <= t;
            out.at(x, y) = (dark == (polarity == Polarity::ink_is_dark)) ? 1 : 0;
        }
    }
    return out;
}

BinaryImage erode(const BinaryImage& img, const StructuringElement& se) {
    BinaryImage out(img.width(), img.height());
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            bool all = true;
            for (int dy = 0; dy < se.height && all; ++dy) {
                for (int dx = 0; dx < se.width && all; ++dx) {
                    const int sx = x - se.anchor_x() + dx;
                    const int sy = y - se.anchor_y() + dy;
                    all = img.contains(sx, sy) && img.at(sx, sy);
                }
            }
            out.at(x, y) = all ? 1 : 0;
        }
    }
    return out;
}

BinaryImage dilate(const BinaryImage& img, const StructuringElement& se) {
    BinaryImage out(img.width(), img.height());
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            bool any = false;
            for (int dy = 0; dy < se.height && !any; ++dy) {
                for (int dx = 0; dx < se.width && !any; ++dx) {
                    const int sx = x - se.anchor_x() + dx;
                    const int sy = y - se.anchor_y() + dy;
                    any = img.contains(sx, sy) && img.at(sx, sy);
                }
            }
            out.at(x, y) = any ? 1 : 0;
        }
    }
    return out;
}

}  // namespace dictscan::reference
