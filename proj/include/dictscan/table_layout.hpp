#pragma once

#include <optional>
#include <span>
#include <vector>

#include "dictscan/geometry.hpp"

namespace dictscan {

/// Snapped intersection points. No two points lie within snap_tol of each
/// other in both axes.
struct GridPoints {
    std::vector<Point> points;
    double snap_tol = 4.0;
};

struct Cell {
    Point top_left;
    Point bottom_right;
    int row_index = 0;
    int col_index = 0;

    bool operator==(const Cell&) const = default;
};

/// Inclusive pixel row range [first, last].
struct RowRange {
    int first = 0;
    int last = 0;
    int height() const noexcept { return last - first + 1; }
    bool operator==(const RowRange&) const = default;
};

struct PageRegions {
    std::optional<RowRange> above;
    std::optional<RowRange> table;
    std::optional<RowRange> below;
    std::vector<Cell> cells;
};

/// Greedy Chebyshev clustering: points within tol of a cluster centroid join
/// it, repeated until no two centroids are within tol.
std::vector<Point> snap_points(std::span<const Point> points, double tol);

/// All pairwise horizontal × vertical intersections, snapped, keeping only
/// points within snap_tol of the page [0,width-1] × [0,height-1].
GridPoints build_grid(std::span<const LineSegment> h_edges, std::span<const LineSegment> v_edges,
                      double snap_tol, int page_width, int page_height);

/// Point-spreading cell search: from each point, the nearest point strictly to
/// the right on the same row and strictly below on the same column define the
/// candidate cell, kept when the diagonal corner exists. Rows and columns match
/// within snap_tol. Output is deduplicated and ordered by (y0, x0).
std::vector<Cell> detect_cells(const GridPoints& grid);

/// Dense row/column indices: rows cluster y0 within snap_tol, columns follow x0.
std::vector<Cell> assign_row_col(std::span<const Cell> cells, double snap_tol);

/// Splits page rows into the table band [min y0, max y1] and the bands
/// strictly above and below it. Without cells the whole page is `above`.
PageRegions split_regions(int page_height, std::span<const Cell> cells);

}  // namespace dictscan
