#include "dictscan/table_layout.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

namespace dictscan {

namespace {

bool near(Point a, Point b, double tol) {
    return std::abs(a.x - b.x) <= tol && std::abs(a.y - b.y) <= tol;
}

struct Cluster {
    double sx = 0;
    double sy = 0;
    double n = 0;
    Point centroid() const { return {sx / n, sy / n}; }
};

bool point_less(Point a, Point b) { return a.y != b.y ? a.y < b.y : a.x < b.x; }

}  // namespace

std::vector<Point> snap_points(std::span<const Point> points, double tol) {
    std::vector<Point> sorted(points.begin(), points.end());
    std::sort(sorted.begin(), sorted.end(), point_less);

    std::vector<Cluster> clusters;
    for (const Point& p : sorted) {
        auto it = std::find_if(clusters.begin(), clusters.end(),
                               [&](const Cluster& c) { return near(c.centroid(), p, tol); });
        if (it == clusters.end()) clusters.push_back({p.x, p.y, 1});
        else {
            it->sx += p.x;
            it->sy += p.y;
            it->n += 1;
        }
    }
    // Centroids can drift together; merge until stable.
    for (bool merged = true; merged;) {
        merged = false;
        for (std::size_t i = 0; i < clusters.size() && !merged; ++i) {
            for (std::size_t j = i + 1; j < clusters.size(); ++j) {
                if (near(clusters[i].centroid(), clusters[j].centroid(), tol)) {
                    clusters[i].sx += clusters[j].sx;
                    clusters[i].sy += clusters[j].sy;
                    clusters[i].n += clusters[j].n;
                    clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(j));
                    merged = true;
                    break;
                }
            }
        }
    }
    std::vector<Point> out;
    out.reserve(clusters.size());
    for (const Cluster& c : clusters) out.push_back(c.centroid());
    std::sort(out.begin(), out.end(), point_less);
    return out;
}

GridPoints build_grid(std::span<const LineSegment> h_edges, std::span<const LineSegment> v_edges,
                      double snap_tol, int page_width, int page_height) {
    const auto nh = static_cast<std::ptrdiff_t>(h_edges.size());
    const auto nv = static_cast<std::ptrdiff_t>(v_edges.size());
    std::vector<std::optional<Point>> raw(static_cast<std::size_t>(nh * nv));
#pragma omp parallel for collapse(2) schedule(static)
    for (std::ptrdiff_t i = 0; i < nh; ++i) {
        for (std::ptrdiff_t j = 0; j < nv; ++j) {
            try {
                raw[static_cast<std::size_t>(i * nv + j)] = intersect(h_edges[i], v_edges[j]);
            } catch (const std::exception&) {
                // parallel pair: no intersection
            }
        }
    }
    std::vector<Point> kept;
    for (const auto& p : raw) {
        if (!p) continue;
        if (p->x < -snap_tol || p->y < -snap_tol || p->x > page_width - 1 + snap_tol ||
            p->y > page_height - 1 + snap_tol)
            continue;
        kept.push_back(*p);
    }
    return {snap_points(kept, snap_tol), snap_tol};
}

std::vector<Cell> detect_cells(const GridPoints& grid) {
    const double tol = grid.snap_tol;
    const auto& pts = grid.points;
    auto same_row = [tol](Point a, Point b) { return std::abs(a.y - b.y) <= tol; };
    auto same_col = [tol](Point a, Point b) { return std::abs(a.x - b.x) <= tol; };

    std::vector<Cell> cells;
    std::set<std::pair<std::pair<double, double>, std::pair<double, double>>> seen;
    for (const Point& p : pts) {
        const Point* right = nullptr;
        const Point* below = nullptr;
        for (const Point& q : pts) {
            if (same_row(p, q) && q.x > p.x && !same_col(p, q) &&
                (!right || q.x < right->x || (q.x == right->x && point_less(q, *right))))
                right = &q;
            if (same_col(p, q) && q.y > p.y && !same_row(p, q) &&
                (!below || q.y < below->y || (q.y == below->y && point_less(q, *below))))
                below = &q;
        }
        if (!right || !below) continue;
        const Point diagonal_target{right->x, below->y};
        const Point* diagonal = nullptr;
        double best = 0.0;
        for (const Point& q : pts) {
            if (!near(q, diagonal_target, tol)) continue;
            const double d = std::max(std::abs(q.x - diagonal_target.x),
                                      std::abs(q.y - diagonal_target.y));
            if (!diagonal || d < best || (d == best && point_less(q, *diagonal))) {
                diagonal = &q;
                best = d;
            }
        }
        if (!diagonal) continue;
        if (!seen.insert({{p.x, p.y}, {diagonal->x, diagonal->y}}).second) continue;
        cells.push_back({p, *diagonal, 0, 0});
    }
    std::sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) {
        return point_less(a.top_left, b.top_left);
    });
    return cells;
}

std::vector<Cell> assign_row_col(std::span<const Cell> cells, double snap_tol) {
    std::vector<Cell> out(cells.begin(), cells.end());
    std::sort(out.begin(), out.end(), [](const Cell& a, const Cell& b) {
        return a.top_left.y != b.top_left.y ? a.top_left.y < b.top_left.y
                                            : a.top_left.x < b.top_left.x;
    });
    // Rows break where consecutive y0 values differ by more than snap_tol.
    std::size_t start = 0;
    int row = 0;
    while (start < out.size()) {
        std::size_t end = start + 1;
        while (end < out.size() &&
               out[end].top_left.y - out[end - 1].top_left.y <= snap_tol)
            ++end;
        std::sort(out.begin() + static_cast<std::ptrdiff_t>(start),
                  out.begin() + static_cast<std::ptrdiff_t>(end),
                  [](const Cell& a, const Cell& b) { return a.top_left.x < b.top_left.x; });
        for (std::size_t i = start; i < end; ++i) {
            out[i].row_index = row;
            out[i].col_index = static_cast<int>(i - start);
        }
        ++row;
        start = end;
    }
    return out;
}

PageRegions split_regions(int page_height, std::span<const Cell> cells) {
    PageRegions regions;
    regions.cells.assign(cells.begin(), cells.end());
    if (page_height <= 0) return regions;
    if (cells.empty()) {
        regions.above = RowRange{0, page_height - 1};
        return regions;
    }
    double top = cells.front().top_left.y;
    double bottom = cells.front().bottom_right.y;
    for (const Cell& c : cells) {
        top = std::min(top, c.top_left.y);
        bottom = std::max(bottom, c.bottom_right.y);
    }
    const int first = std::clamp(static_cast<int>(std::floor(top)), 0, page_height - 1);
    const int last = std::clamp(static_cast<int>(std::ceil(bottom)), first, page_height - 1);
    regions.table = RowRange{first, last};
    if (first > 0) regions.above = RowRange{0, first - 1};
    if (last < page_height - 1) regions.below = RowRange{last + 1, page_height - 1};
    return regions;
}

}  // namespace dictscan
