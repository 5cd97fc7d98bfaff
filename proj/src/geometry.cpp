#include "dictscan/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "dictscan/error.hpp"

namespace dictscan {

LineSegment::LineSegment(Point p1, Point p2, SegmentOrientation orientation)
    : p1_(p1), p2_(p2), orientation_(orientation) {
    if (!std::isfinite(p1.x) || !std::isfinite(p1.y) || !std::isfinite(p2.x) ||
        !std::isfinite(p2.y))
        throw std::invalid_argument("segment endpoints must be finite");
    if (p1 == p2) throw std::invalid_argument("segment endpoints coincide");
    const double dx = std::abs(p2.x - p1.x);
    const double dy = std::abs(p2.y - p1.y);
    if (orientation == SegmentOrientation::horizontal && dy > dx)
        throw std::invalid_argument("horizontal segment is steeper than 45 degrees");
    if (orientation == SegmentOrientation::vertical && dx > dy)
        throw std::invalid_argument("vertical segment is flatter than 45 degrees");
}

double LineSegment::length() const noexcept { return std::hypot(p2_.x - p1_.x, p2_.y - p1_.y); }

Point intersect(const LineSegment& a, const LineSegment& b) {
    const Point n_a = a.p2() - a.p1();
    const Point u_a{-n_a.y, n_a.x};
    const Point n_b = b.p2() - b.p1();
    const Point n_p = a.p1() - b.p1();
    const double denom = dot(u_a, n_b);
    const double eps = 1e-9 * std::hypot(n_a.x, n_a.y) * std::hypot(n_b.x, n_b.y);
    if (std::abs(denom) <= eps) throw Parallel("segments are parallel");
    return (dot(u_a, n_p) / denom) * n_b + b.p1();
}

SkewAngle skew_angle(const LineSegment& edge) {
    const double dy = edge.p1().y - edge.p2().y;
    if (dy == 0.0) throw NotVertical("edge has no vertical extent");
    return {std::atan((edge.p1().x - edge.p2().x) / dy)};
}

namespace {

// Coordinates of a point in (axial, perpendicular) form.
struct AxialPoint {
    double axial;
    double perp;
};

AxialPoint to_axial(Point p, Orientation o) {
    return o == Orientation::horizontal ? AxialPoint{p.x, p.y} : AxialPoint{p.y, p.x};
}

Point from_axial(double axial, double perp, Orientation o) {
    return o == Orientation::horizontal ? Point{axial, perp} : Point{perp, axial};
}

struct Span {
    AxialPoint a;  // lower axial end
    AxialPoint b;  // upper axial end

    double lo() const { return a.axial; }
    double hi() const { return b.axial; }
    double perp_at(double axial) const {
        const double d = b.axial - a.axial;
        if (d == 0.0) return 0.5 * (a.perp + b.perp);
        return a.perp + (axial - a.axial) * (b.perp - a.perp) / d;
    }
};

Span to_span(const LineSegment& s, Orientation o) {
    AxialPoint p = to_axial(s.p1(), o);
    AxialPoint q = to_axial(s.p2(), o);
    if (q.axial < p.axial || (q.axial == p.axial && q.perp < p.perp)) std::swap(p, q);
    return {p, q};
}

bool linked(const Span& s, const Span& t, const ConsolidateParams& params) {
    const double overlap_lo = std::max(s.lo(), t.lo());
    const double overlap_hi = std::min(s.hi(), t.hi());
    const double gap = overlap_lo - overlap_hi;
    if (gap > params.gap_tol) return false;
    double diff;
    if (gap <= 0.0) {
        const double mid = 0.5 * (overlap_lo + overlap_hi);
        diff = std::abs(s.perp_at(mid) - t.perp_at(mid));
    } else if (s.hi() < t.lo()) {
        diff = std::abs(s.b.perp - t.a.perp);
    } else {
        diff = std::abs(t.b.perp - s.a.perp);
    }
    return diff <= params.offset_tol;
}

struct Groups {
    std::vector<int> parent;
    explicit Groups(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
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

Span fit_group(const std::vector<Span>& members) {
    double lo = members.front().lo();
    double hi = members.front().hi();
    double sa = 0, sp = 0, saa = 0, sap = 0;
    double n = 0;
    for (const Span& m : members) {
        lo = std::min(lo, m.lo());
        hi = std::max(hi, m.hi());
        for (const AxialPoint& p : {m.a, m.b}) {
            sa += p.axial;
            sp += p.perp;
            saa += p.axial * p.axial;
            sap += p.axial * p.perp;
            n += 1;
        }
    }
    const double mean_a = sa / n;
    const double mean_p = sp / n;
    const double var_a = saa / n - mean_a * mean_a;
    double slope = 0.0;
    if (var_a > 1e-12) slope = (sap / n - mean_a * mean_p) / var_a;
    if (std::abs(slope) > 1.0) slope = 0.0;
    auto at = [&](double axial) { return mean_p + slope * (axial - mean_a); };
    return {{lo, at(lo)}, {hi, at(hi)}};
}

LineSegment to_segment(const Span& s, Orientation o) {
    return LineSegment(from_axial(s.a.axial, s.a.perp, o), from_axial(s.b.axial, s.b.perp, o),
                       to_segment_orientation(o));
}

}  // namespace

AxialView axial_view(const LineSegment& s, Orientation orientation) {
    const Span span = to_span(s, orientation);
    return {span.lo(), span.hi(), span.perp_at(0.5 * (span.lo() + span.hi()))};
}

std::vector<LineSegment> consolidate(std::span<const LineSegment> segments,
                                     Orientation orientation, const ConsolidateParams& params) {
    std::vector<Span> spans;
    spans.reserve(segments.size());
    for (const LineSegment& s : segments) spans.push_back(to_span(s, orientation));

    for (bool merged = true; merged;) {
        merged = false;
        const auto n = spans.size();
        Groups groups(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (linked(spans[i], spans[j], params))
                    groups.unite(static_cast<int>(i), static_cast<int>(j));

        std::vector<std::vector<Span>> members(n);
        for (std::size_t i = 0; i < n; ++i) members[groups.find(static_cast<int>(i))].push_back(spans[i]);
        std::vector<Span> next;
        for (auto& group : members) {
            if (group.empty()) continue;
            if (group.size() == 1) {
                next.push_back(group.front());
            } else {
                next.push_back(fit_group(group));
                merged = true;
            }
        }
        spans = std::move(next);
    }

    std::sort(spans.begin(), spans.end(), [](const Span& s, const Span& t) {
        const double os = s.perp_at(0.5 * (s.lo() + s.hi()));
        const double ot = t.perp_at(0.5 * (t.lo() + t.hi()));
        if (os != ot) return os < ot;
        if (s.lo() != t.lo()) return s.lo() < t.lo();
        return s.hi() < t.hi();
    });
    std::vector<LineSegment> out;
    out.reserve(spans.size());
    for (const Span& s : spans) out.push_back(to_segment(s, orientation));
    return out;
}

Point rotate_point(Point p, Point center, double angle) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    const double dx = p.x - center.x;
    const double dy = p.y - center.y;
    return {center.x + dx * c + dy * s, center.y - dx * s + dy * c};
}

namespace {

std::uint8_t sample_bilinear(const GrayImage& img, double sx, double sy) {
    const int w = img.width();
    const int h = img.height();
    constexpr double eps = 1e-9;
    if (sx < -eps || sy < -eps || sx > w - 1 + eps || sy > h - 1 + eps) return 255;
    sx = std::clamp(sx, 0.0, static_cast<double>(w - 1));
    sy = std::clamp(sy, 0.0, static_cast<double>(h - 1));
    const int x0 = static_cast<int>(sx);
    const int y0 = static_cast<int>(sy);
    const int x1 = std::min(x0 + 1, w - 1);
    const int y1 = std::min(y0 + 1, h - 1);
    const double fx = sx - x0;
    const double fy = sy - y0;
    const double top = img.at(x0, y0) * (1 - fx) + img.at(x1, y0) * fx;
    const double bottom = img.at(x0, y1) * (1 - fx) + img.at(x1, y1) * fx;
    return static_cast<std::uint8_t>(std::lround(top * (1 - fy) + bottom * fy));
}

std::uint8_t sample_nearest(const BinaryImage& img, double sx, double sy) {
    const long x = std::lround(sx);
    const long y = std::lround(sy);
    if (x < 0 || y < 0 || x >= img.width() || y >= img.height()) return 0;
    return img.at(static_cast<int>(x), static_cast<int>(y));
}

// Ink if any source pixel with a non-zero bilinear weight is ink.
std::uint8_t sample_any(const BinaryImage& img, double sx, double sy) {
    const int x0 = static_cast<int>(std::floor(sx));
    const int y0 = static_cast<int>(std::floor(sy));
    const int x1 = sx > x0 ? x0 + 1 : x0;
    const int y1 = sy > y0 ? y0 + 1 : y0;
    for (int y : {y0, y1})
        for (int x : {x0, x1})
            if (img.contains(x, y) && img.at(x, y)) return 1;
    return 0;
}

// Output pixel (x, y) samples the source at the inverse rotation, stepping
// the source coordinate incrementally along each row.
template <typename Image, typename Sampler>
Image rotate_rows(const Image& img, double angle, Sampler sample) {
    Image out(img.width(), img.height());
    if (img.empty()) return out;
    const double cx = 0.5 * (img.width() - 1);
    const double cy = 0.5 * (img.height() - 1);
    const double c = std::cos(-angle);
    const double s = std::sin(-angle);
#pragma omp parallel for schedule(static)
    for (int y = 0; y < img.height(); ++y) {
        const double dy = y - cy;
        auto dst = out.row(y);
        for (int x = 0; x < img.width(); ++x) {
            const double dx = x - cx;
            dst[x] = sample(img, cx + dx * c + dy * s, cy - dx * s + dy * c);
        }
    }
    return out;
}

}  // namespace

GrayImage rotate(const GrayImage& img, double angle) {
    return rotate_rows(img, angle, sample_bilinear);
}

BinaryImage rotate(const BinaryImage& img, double angle, BinaryResample resample) {
    if (resample == BinaryResample::any_neighbour) return rotate_rows(img, angle, sample_any);
    return rotate_rows(img, angle, sample_nearest);
}

namespace reference {

GrayImage rotate(const GrayImage& img, double angle) {
    GrayImage out(img.width(), img.height());
    const Point center{0.5 * (img.width() - 1), 0.5 * (img.height() - 1)};
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x) {
            const Point src = rotate_point({double(x), double(y)}, center, -angle);
            out.at(x, y) = sample_bilinear(img, src.x, src.y);
        }
    return out;
}

BinaryImage rotate(const BinaryImage& img, double angle, BinaryResample resample) {
    BinaryImage out(img.width(), img.height());
    const Point center{0.5 * (img.width() - 1), 0.5 * (img.height() - 1)};
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x) {
            const Point src = rotate_point({double(x), double(y)}, center, -angle);
            out.at(x, y) = resample == BinaryResample::nearest ? sample_nearest(img, src.x, src.y)
                                                               : sample_any(img, src.x, src.y);
        }
    return out;
}

}  // namespace reference

}  // namespace dictscan
