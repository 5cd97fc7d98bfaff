#include "dictscan/hough.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace dictscan {

namespace {

struct Pixel {
    int x;
    int y;
};

// Path walker along a line with direction (dir_x, dir_y), advancing one
// pixel per step along the dominant axis.
struct Walk {
    double step_x;
    double step_y;

    static Walk along(double dir_x, double dir_y) {
        if (std::abs(dir_x) >= std::abs(dir_y))
            return {dir_x > 0 ? 1.0 : -1.0, dir_y / std::abs(dir_x)};
        return {dir_x / std::abs(dir_y), dir_y > 0 ? 1.0 : -1.0};
    }
    Pixel at(Pixel origin, int k, int sign) const {
        return {origin.x + static_cast<int>(std::lround(sign * k * step_x)),
                origin.y + static_cast<int>(std::lround(sign * k * step_y))};
    }
};

}  // namespace

std::vector<LineSegment> detect_segments(const BinaryImage& mask, Orientation orientation,
                                         const HoughParams& params) {
    if (params.rho <= 0 || params.theta_deg <= 0 || params.angle_tolerance_deg < 0 ||
        params.threshold < 1 || params.max_gap < 0)
        throw std::invalid_argument("invalid Hough parameters");
    std::vector<LineSegment> lines;
    if (mask.empty()) return lines;

    const int w = mask.width();
    const int h = mask.height();
    const int min_length =
        params.min_length > 0
            ? params.min_length
            : std::max(1, (orientation == Orientation::horizontal ? w : h) / 40);

    // Normal angles: horizontal lines have normals near pi/2, vertical near 0.
    const double res = params.theta_deg * std::numbers::pi / 180.0;
    const int half = static_cast<int>(std::lround(params.angle_tolerance_deg / params.theta_deg));
    const int num_angles = 2 * half + 1;
    const double center = orientation == Orientation::horizontal ? std::numbers::pi / 2 : 0.0;
    std::vector<double> cos_tab(num_angles), sin_tab(num_angles);
    for (int k = 0; k < num_angles; ++k) {
        const double a = center + (k - half) * res;
        cos_tab[k] = std::cos(a) / params.rho;
        sin_tab[k] = std::sin(a) / params.rho;
    }
    const double diag = std::hypot(w, h);
    const int rho_offset = static_cast<int>(std::ceil(diag / params.rho)) + 1;
    const int num_rho = 2 * rho_offset + 1;

    std::vector<int> accum(static_cast<std::size_t>(num_angles) * num_rho, 0);
    std::vector<std::uint8_t> live(mask.pixels().begin(), mask.pixels().end());
    std::vector<std::uint8_t> voted(live.size(), 0);
    std::vector<Pixel> points;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            if (mask.at(x, y)) points.push_back({x, y});

    auto index = [w](Pixel p) { return static_cast<std::size_t>(p.y) * w + p.x; };
    auto vote = [&](Pixel p, int delta) {
        for (int k = 0; k < num_angles; ++k) {
            const int r = static_cast<int>(std::lround(p.x * cos_tab[k] + p.y * sin_tab[k])) + rho_offset;
            accum[static_cast<std::size_t>(k) * num_rho + r] += delta;
        }
    };

    const int band = std::max(0, params.band);
    std::vector<Pixel> support;
    std::mt19937_64 rng(params.seed);
    for (std::size_t count = points.size(); count > 0; --count) {
        const std::size_t pick = std::uniform_int_distribution<std::size_t>(0, count - 1)(rng);
        const Pixel seed = points[pick];
        points[pick] = points[count - 1];
        if (!live[index(seed)]) continue;

        int best_votes = params.threshold - 1;
        int best_k = -1;
        for (int k = 0; k < num_angles; ++k) {
            const int r = static_cast<int>(std::lround(seed.x * cos_tab[k] + seed.y * sin_tab[k])) + rho_offset;
            const int v = ++accum[static_cast<std::size_t>(k) * num_rho + r];
            if (v > best_votes) {
                best_votes = v;
                best_k = k;
            }
        }
        voted[index(seed)] = 1;
        if (best_k < 0) continue;

        // Direction of the line is perpendicular to its normal. The walk
        // accepts live pixels up to params.band off the path.
        const Walk walk = Walk::along(-sin_tab[best_k], cos_tab[best_k]);
        const Pixel perp = std::abs(walk.step_y) == 1.0 ? Pixel{1, 0} : Pixel{0, 1};
        auto hit = [&](Pixel p) {
            for (int d = 0; d <= band; ++d) {
                for (int s : {-d, d}) {
                    const Pixel q{p.x + s * perp.x, p.y + s * perp.y};
                    if (mask.contains(q.x, q.y) && live[index(q)]) return true;
                    if (d == 0) break;
                }
            }
            return false;
        };
        int end_k[2] = {0, 0};
        for (int side = 0; side < 2; ++side) {
            const int sign = side == 0 ? 1 : -1;
            int gap = 0;
            for (int k = 1;; ++k) {
                const Pixel p = walk.at(seed, k, sign);
                if (!mask.contains(p.x, p.y)) break;
                if (hit(p)) {
                    gap = 0;
                    end_k[side] = k;
                } else if (++gap > params.max_gap) {
                    break;
                }
            }
        }
        const Pixel ends[2] = {walk.at(seed, end_k[0], 1), walk.at(seed, end_k[1], -1)};
        const bool good_line = std::abs(ends[1].x - ends[0].x) >= min_length ||
                               std::abs(ends[1].y - ends[0].y) >= min_length;

        // Second walk: retire every live pixel in the band. Support counts
        // only pixels on the path itself.
        support.clear();
        int on_path = 0;
        auto retire = [&](Pixel p) {
            for (int d = -band; d <= band; ++d) {
                const Pixel q{p.x + d * perp.x, p.y + d * perp.y};
                if (!mask.contains(q.x, q.y) || !live[index(q)]) continue;
                support.push_back(q);
                if (d == 0) ++on_path;
                if (good_line && voted[index(q)]) vote(q, -1);
                live[index(q)] = 0;
            }
        };
        retire(seed);
        for (int side = 0; side < 2; ++side)
            for (int k = 1; k <= end_k[side]; ++k) retire(walk.at(seed, k, side == 0 ? 1 : -1));
        if (!good_line || on_path < params.threshold) continue;

        const double path_dx = std::abs(ends[1].x - ends[0].x);
        const double path_dy = std::abs(ends[1].y - ends[0].y);
        const bool horizontal = orientation == Orientation::horizontal;
        if (horizontal ? (path_dy > path_dx || path_dx == 0) : (path_dx > path_dy || path_dy == 0))
            continue;

        // Least-squares centreline through the support, evaluated at the
        // axial extremes of the path: offset = a + b * axial.
        double sa = 0, so = 0, saa = 0, sao = 0;
        for (const Pixel& q : support) {
            const double ax = horizontal ? q.x : q.y;
            const double of = horizontal ? q.y : q.x;
            sa += ax;
            so += of;
            saa += ax * ax;
            sao += ax * of;
        }
        const double n = static_cast<double>(support.size());
        const double den = n * saa - sa * sa;
        double b = den > 0 ? (n * sao - sa * so) / den : 0.0;
        if (std::abs(b) > 1.0) b = 0.0;
        const double a = (so - b * sa) / n;
        auto place = [&](Pixel e) {
            const double ax = horizontal ? e.x : e.y;
            const double of = a + b * ax;
            return horizontal ? Point{ax, of} : Point{of, ax};
        };
        lines.emplace_back(place(ends[1]), place(ends[0]), to_segment_orientation(orientation));
    }
    return lines;
}

LineSegment refine_segment(const BinaryImage& mask, const LineSegment& seg, Orientation orientation,
                           double band, int iterations) {
    const bool horizontal = orientation == Orientation::horizontal;
    LineSegment current = seg;
    for (int it = 0; it < iterations; ++it) {
        const AxialView view = axial_view(current, orientation);
        const Point p1 = current.p1();
        const Point p2 = current.p2();
        const double a1 = horizontal ? p1.x : p1.y;
        const double a2 = horizontal ? p2.x : p2.y;
        const double o1 = horizontal ? p1.y : p1.x;
        const double o2 = horizontal ? p2.y : p2.x;
        const double slope = (o2 - o1) / (a2 - a1);
        const int lo = static_cast<int>(std::ceil(view.lo));
        const int hi = static_cast<int>(std::floor(view.hi));
        const int limit = horizontal ? mask.width() : mask.height();

        double n = 0, sa = 0, so = 0, saa = 0, sao = 0;
        for (int a = std::max(lo, 0); a <= std::min(hi, limit - 1); ++a) {
            const double centre = o1 + slope * (a - a1);
            const int from = static_cast<int>(std::ceil(centre - band));
            const int to = static_cast<int>(std::floor(centre + band));
            for (int o = from; o <= to; ++o) {
                const int x = horizontal ? a : o;
                const int y = horizontal ? o : a;
                if (!mask.contains(x, y) || !mask.at(x, y)) continue;
                n += 1;
                sa += a;
                so += o;
                saa += double(a) * a;
                sao += double(a) * o;
            }
        }
        const double den = n * saa - sa * sa;
        if (n < 2 || den <= 0) break;
        const double b = (n * sao - sa * so) / den;
        if (std::abs(b) > 1.0) break;
        const double c = (so - b * sa) / n;
        const Point q1 = horizontal ? Point{view.lo, c + b * view.lo} : Point{c + b * view.lo, view.lo};
        const Point q2 = horizontal ? Point{view.hi, c + b * view.hi} : Point{c + b * view.hi, view.hi};
        current = LineSegment(q1, q2, current.orientation());
    }
    return current;
}

}  // namespace dictscan
