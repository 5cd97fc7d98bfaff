#pragma once

#include <span>
#include <vector>

#include "dictscan/image.hpp"
#include "dictscan/imaging.hpp"

namespace dictscan {

struct Point {
    double x = 0.0;
    double y = 0.0;

    bool operator==(const Point&) const = default;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }

enum class SegmentOrientation { horizontal, vertical, free };

/// A line segment with distinct endpoints. Horizontal segments satisfy
/// |dy| <= |dx|; vertical segments |dx| <= |dy|.
class LineSegment {
public:
    LineSegment(Point p1, Point p2, SegmentOrientation orientation = SegmentOrientation::free);

    Point p1() const noexcept { return p1_; }
    Point p2() const noexcept { return p2_; }
    SegmentOrientation orientation() const noexcept { return orientation_; }
    double length() const noexcept;

    bool operator==(const LineSegment&) const = default;

private:
    Point p1_;
    Point p2_;
    SegmentOrientation orientation_;
};

/// Angle between a near-vertical edge and the y axis, in radians.
struct SkewAngle {
    double theta = 0.0;
};

inline SegmentOrientation to_segment_orientation(Orientation o) {
    return o == Orientation::horizontal ? SegmentOrientation::horizontal
                                        : SegmentOrientation::vertical;
}

/// Intersection of the infinite lines through a and b, computed as
/// P = ((u_a · n_p) / (u_a · n_b)) n_b + b1 with n_a = a2 - a1,
/// u_a = (-n_a.y, n_a.x), n_b = b2 - b1 and n_p = a1 - b1.
/// Throws Parallel when |u_a · n_b| <= 1e-9 |n_a| |n_b|.
Point intersect(const LineSegment& a, const LineSegment& b);

/// theta = atan((x1 - x2) / (y1 - y2)). Throws NotVertical when y1 == y2.
SkewAngle skew_angle(const LineSegment& edge);

struct ConsolidateParams {
    double gap_tol = 20.0;
    double offset_tol = 3.0;
};

/// Merges fragmented collinear segments of one orientation. Two segments are
/// linked when their axial extents are within gap_tol of touching and their
/// perpendicular coordinates, compared where they face each other, differ by
/// at most offset_tol. Linked groups are replaced by the least-squares line
/// through their endpoints spanning the group's axial extent; this repeats
/// until nothing merges. Output is sorted by perpendicular offset.
std::vector<LineSegment> consolidate(std::span<const LineSegment> segments,
                                     Orientation orientation,
                                     const ConsolidateParams& params = {});

/// Axial (along-line) coordinate range and perpendicular coordinate at the
/// axial midpoint, for a segment viewed in the given orientation.
struct AxialView {
    double lo = 0.0;
    double hi = 0.0;
    double offset = 0.0;
};
AxialView axial_view(const LineSegment& s, Orientation orientation);

// Rotation about the image centre ((w-1)/2, (h-1)/2). Positive angles turn
// content counter-clockwise as displayed (y down), so a page whose vertical
// rules have skew theta is straightened by rotate(img, -theta). The canvas
// keeps its size; uncovered pixels become background (255 grey, 0 binary).
Point rotate_point(Point p, Point center, double angle);
enum class BinaryResample {
    nearest,
    any_neighbour,  // ink if any bilinear source neighbour is ink; thin rules stay unbroken
};

GrayImage rotate(const GrayImage& img, double angle);  // bilinear
BinaryImage rotate(const BinaryImage& img, double angle,
                   BinaryResample resample = BinaryResample::nearest);

namespace reference {

GrayImage rotate(const GrayImage& img, double angle);
BinaryImage rotate(const BinaryImage& img, double angle,
                   BinaryResample resample = BinaryResample::nearest);

}  // namespace reference

}  // namespace dictscan
