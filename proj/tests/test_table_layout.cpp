#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "dictscan/table_layout.hpp"

using namespace dictscan;

namespace {

std::vector<Point> lattice(std::initializer_list<double> xs, std::initializer_list<double> ys) {
    std::vector<Point> pts;
    for (double y : ys)
        for (double x : xs) pts.push_back({x, y});
    return pts;
}

GridPoints grid_of(std::vector<Point> pts, double tol = 4.0) {
    std::sort(pts.begin(), pts.end(), [](Point a, Point b) { return a.y != b.y ? a.y < b.y : a.x < b.x; });
    return {std::move(pts), tol};
}

using Rect4 = std::array<double, 4>;

// Every axis-aligned rectangle with all four corners present and no other
// point on its top or left edge.
std::set<Rect4> minimal_rectangles(const std::vector<Point>& pts) {
    std::set<std::pair<double, double>> has;
    for (const Point& p : pts) has.insert({p.x, p.y});
    std::set<Rect4> out;
    for (const Point& a : pts)
        for (const Point& d : pts) {
            if (d.x <= a.x || d.y <= a.y) continue;
            if (!has.count({d.x, a.y}) || !has.count({a.x, d.y})) continue;
            bool clear = true;
            for (const Point& q : pts) {
                if (q.y == a.y && q.x > a.x && q.x < d.x) clear = false;
                if (q.x == a.x && q.y > a.y && q.y < d.y) clear = false;
            }
            if (clear) out.insert({a.x, a.y, d.x, d.y});
        }
    return out;
}

std::set<Rect4> as_set(const std::vector<Cell>& cells) {
    std::set<Rect4> out;
    for (const Cell& c : cells) out.insert({c.top_left.x, c.top_left.y, c.bottom_right.x, c.bottom_right.y});
    return out;
}

LineSegment hseg(double y, double x0, double x1) { return LineSegment({x0, y}, {x1, y}, SegmentOrientation::horizontal); }
LineSegment vseg(double x, double y0, double y1) { return LineSegment({x, y0}, {x, y1}, SegmentOrientation::vertical); }

}  // namespace

TEST(SnapPoints, MergesWithinToleranceToCentroid) {
    const std::vector<Point> pts{{10, 10}, {12, 11}, {50, 10}, {11, 13}};
    const auto out = snap_points(pts, 3.0);
    ASSERT_EQ(out.size(), 2u);
    EXPECT_EQ(out[0], (Point{50, 10}));
    EXPECT_NEAR(out[1].x, 11.0, 1e-12);
    EXPECT_NEAR(out[1].y, 34.0 / 3, 1e-12);
}

TEST(SnapPoints, NoTwoOutputsWithinTolerance) {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> c(0, 100);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<Point> pts(40);
        for (auto& p : pts) p = {c(rng), c(rng)};
        const auto out = snap_points(pts, 4.0);
        for (std::size_t i = 0; i < out.size(); ++i)
            for (std::size_t j = i + 1; j < out.size(); ++j)
                EXPECT_FALSE(std::abs(out[i].x - out[j].x) <= 4.0 && std::abs(out[i].y - out[j].y) <= 4.0);
    }
}

TEST(BuildGrid, CompleteThreeByThree) {
    const std::vector<LineSegment> h{hseg(10, 0, 200), hseg(60, 0, 200), hseg(110, 0, 200)};
    const std::vector<LineSegment> v{vseg(5, 0, 150), vseg(80, 0, 150), vseg(190, 0, 150)};
    const GridPoints g = build_grid(h, v, 4.0, 300, 200);
    EXPECT_EQ(g.points.size(), 9u);
    EXPECT_EQ(g.snap_tol, 4.0);
}

TEST(BuildGrid, NearDuplicateVerticalsMerge) {
    const std::vector<LineSegment> h{hseg(10, 0, 200), hseg(60, 0, 200)};
    const std::vector<LineSegment> v{vseg(50, 0, 150), vseg(51, 0, 150)};
    const GridPoints g = build_grid(h, v, 3.0, 300, 200);
    ASSERT_EQ(g.points.size(), 2u);
    EXPECT_NEAR(g.points[0].x, 50.5, 1e-12);
}

TEST(BuildGrid, DropsFarOutsidePage) {
    const LineSegment tilted({0, 0}, {10, 100}, SegmentOrientation::vertical);
    const std::vector<LineSegment> h{hseg(50, 0, 100), hseg(5000, 0, 100)};
    const std::vector<LineSegment> v{tilted};
    const GridPoints g = build_grid(h, v, 4.0, 100, 100);
    ASSERT_EQ(g.points.size(), 1u);
    EXPECT_NEAR(g.points[0].y, 50.0, 1e-12);
}

TEST(BuildGrid, EmptyEdgesGiveEmptyGrid) {
    EXPECT_TRUE(build_grid({}, {}, 4.0, 100, 100).points.empty());
}

TEST(DetectCells, MinimalCell) {
    const auto cells = detect_cells(grid_of({{0, 0}, {1, 0}, {0, 1}, {1, 1}}, 0.5));
    ASSERT_EQ(cells.size(), 1u);
    EXPECT_EQ(cells[0].top_left, (Point{0, 0}));
    EXPECT_EQ(cells[0].bottom_right, (Point{1, 1}));
}

TEST(DetectCells, MissingDiagonalGivesNothing) {
    EXPECT_TRUE(detect_cells(grid_of({{0, 0}, {1, 0}, {0, 1}}, 0.5)).empty());
}

TEST(DetectCells, ThreeByThreeRowMajor) {
    const auto cells = detect_cells(grid_of(lattice({0, 50, 100}, {0, 40, 80})));
    ASSERT_EQ(cells.size(), 4u);
    EXPECT_EQ(cells[0].top_left, (Point{0, 0}));
    EXPECT_EQ(cells[1].top_left, (Point{50, 0}));
    EXPECT_EQ(cells[2].top_left, (Point{0, 40}));
    EXPECT_EQ(cells[3].top_left, (Point{50, 40}));
    EXPECT_EQ(cells[3].bottom_right, (Point{100, 80}));
}

TEST(DetectCells, FiveByFour) {
    const auto pts = lattice({0, 60, 120, 180, 240}, {0, 30, 60, 90});
    const auto cells = detect_cells(grid_of(pts));
    EXPECT_EQ(cells.size(), 12u);
    EXPECT_EQ(as_set(cells), minimal_rectangles(pts));
}

TEST(DetectCells, ToleratesJitterWithinSnapTolerance) {
    std::vector<Point> pts{{0, 0}, {52, 1.5}, {101, -1}, {1, 40}, {49, 42}, {100, 39}};
    const auto cells = detect_cells(grid_of(pts));
    ASSERT_EQ(cells.size(), 2u);
    EXPECT_EQ(cells[0].bottom_right, (Point{49, 42}));
    EXPECT_EQ(cells[1].top_left, (Point{52, 1.5}));
}

TEST(DetectCells, CompleteGridsGiveProductOfGaps) {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> dim(2, 8), step(10, 60);
    for (int trial = 0; trial < 100; ++trial) {
        const int rows = dim(rng), cols = dim(rng);
        std::vector<double> xs{0}, ys{0};
        for (int c = 1; c < cols; ++c) xs.push_back(xs.back() + step(rng));
        for (int r = 1; r < rows; ++r) ys.push_back(ys.back() + step(rng));
        std::vector<Point> pts;
        for (double y : ys)
            for (double x : xs) pts.push_back({x, y});
        const auto cells = detect_cells(grid_of(pts));
        ASSERT_EQ(cells.size(), static_cast<std::size_t>((rows - 1) * (cols - 1)));
        // Interiors are pairwise disjoint.
        for (std::size_t i = 0; i < cells.size(); ++i)
            for (std::size_t j = i + 1; j < cells.size(); ++j) {
                const double ox = std::min(cells[i].bottom_right.x, cells[j].bottom_right.x) -
                                  std::max(cells[i].top_left.x, cells[j].top_left.x);
                const double oy = std::min(cells[i].bottom_right.y, cells[j].bottom_right.y) -
                                  std::max(cells[i].top_left.y, cells[j].top_left.y);
                EXPECT_FALSE(ox > 0 && oy > 0);
            }
    }
}

TEST(DetectCells, MatchesMinimalRectangleOracleAndIgnoresOrder) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<Point> all;
        for (int y = 0; y < 7; ++y)
            for (int x = 0; x < 7; ++x) all.push_back({x * 20.0, y * 20.0});
        std::shuffle(all.begin(), all.end(), rng);
        const std::size_t n = std::uniform_int_distribution<std::size_t>(0, 30)(rng);
        std::vector<Point> pts(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(n));

        const auto cells = detect_cells(grid_of(pts));
        ASSERT_EQ(as_set(cells), minimal_rectangles(pts)) << "trial " << trial;
        ASSERT_EQ(cells.size(), as_set(cells).size());

        GridPoints shuffled{pts, 4.0};
        std::shuffle(shuffled.points.begin(), shuffled.points.end(), rng);
        EXPECT_EQ(detect_cells(shuffled), cells);
    }
}

TEST(AssignRowCol, ThreeByThree) {
    const auto cells = assign_row_col(detect_cells(grid_of(lattice({0, 50, 100}, {0, 40, 80}))), 4.0);
    ASSERT_EQ(cells.size(), 4u);
    std::set<std::pair<int, int>> idx;
    for (const Cell& c : cells) idx.insert({c.row_index, c.col_index});
    EXPECT_EQ(idx, (std::set<std::pair<int, int>>{{0, 0}, {0, 1}, {1, 0}, {1, 1}}));
}

TEST(AssignRowCol, SingleCell) {
    const std::vector<Cell> one{{{3, 4}, {30, 40}, 7, 9}};
    const auto out = assign_row_col(one, 4.0);
    ASSERT_EQ(out.size(), 1u);
    EXPECT_EQ(out[0].row_index, 0);
    EXPECT_EQ(out[0].col_index, 0);
}

TEST(AssignRowCol, ColumnsFollowXNotDetectionOrder) {
    const std::vector<Cell> swapped{{{60, 12}, {100, 40}}, {{10, 10}, {60, 40}}};
    const auto out = assign_row_col(swapped, 4.0);
    ASSERT_EQ(out.size(), 2u);
    for (const Cell& c : out) {
        EXPECT_EQ(c.row_index, 0);
        EXPECT_EQ(c.col_index, c.top_left.x < 30 ? 0 : 1);
    }
}

TEST(AssignRowCol, IndicesAreDense) {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Point> pts;
        for (int y = 0; y < 5; ++y)
            for (int x = 0; x < 6; ++x)
                if (std::bernoulli_distribution(0.8)(rng)) pts.push_back({x * 30.0, y * 25.0});
        const auto cells = assign_row_col(detect_cells(grid_of(pts)), 4.0);
        int max_row = -1;
        std::set<int> rows;
        for (const Cell& c : cells) {
            rows.insert(c.row_index);
            max_row = std::max(max_row, c.row_index);
        }
        EXPECT_EQ(static_cast<int>(rows.size()), max_row + 1);
        for (int r : rows) {
            std::vector<int> cols;
            for (const Cell& c : cells)
                if (c.row_index == r) cols.push_back(c.col_index);
            std::sort(cols.begin(), cols.end());
            for (int k = 0; k < static_cast<int>(cols.size()); ++k) EXPECT_EQ(cols[k], k);
        }
    }
}

TEST(SplitRegions, BandsAroundTable) {
    const std::vector<Cell> cells{{{10, 100}, {200, 300}}, {{10, 300}, {200, 500}}};
    const PageRegions r = split_regions(800, cells);
    ASSERT_TRUE(r.above && r.table && r.below);
    EXPECT_EQ(*r.above, (RowRange{0, 99}));
    EXPECT_EQ(*r.table, (RowRange{100, 500}));
    EXPECT_EQ(*r.below, (RowRange{501, 799}));
    EXPECT_EQ(r.cells.size(), 2u);
}

TEST(SplitRegions, TableAtTopHasNoAbove) {
    const std::vector<Cell> cells{{{0, 0}, {50, 40}}};
    const PageRegions r = split_regions(100, cells);
    EXPECT_FALSE(r.above);
    EXPECT_EQ(*r.below, (RowRange{41, 99}));
}

TEST(SplitRegions, NoCellsMeansWholePageAbove) {
    const PageRegions r = split_regions(640, {});
    ASSERT_TRUE(r.above);
    EXPECT_EQ(*r.above, (RowRange{0, 639}));
    EXPECT_FALSE(r.table);
    EXPECT_FALSE(r.below);
}

TEST(SplitRegions, PartitionsEveryRow) {
    std::mt19937_64 rng(13);
    std::uniform_int_distribution<int> h(1, 500);
    for (int trial = 0; trial < 300; ++trial) {
        const int height = h(rng);
        std::uniform_real_distribution<double> y(0, height - 1);
        std::vector<Cell> cells;
        const int n = trial % 4;
        for (int k = 0; k < n; ++k) {
            double a = y(rng), b = y(rng);
            if (a > b) std::swap(a, b);
            cells.push_back({{0, a}, {10, b}});
        }
        const PageRegions r = split_regions(height, cells);
        int total = 0;
        int next = 0;
        for (const auto& band : {r.above, r.table, r.below}) {
            if (!band) continue;
            EXPECT_EQ(band->first, next);
            EXPECT_GE(band->height(), 1);
            total += band->height();
            next = band->last + 1;
        }
        EXPECT_EQ(total, height);
    }
}
