#pragma once

#include <cstdint>
#include <vector>

#include "dictscan/geometry.hpp"
#include "dictscan/image.hpp"

namespace dictscan {

struct HoughParams {
    double rho = 1.0;                  // pixels
    double theta_deg = 1.0;            // angular resolution
    double angle_tolerance_deg = 5.0;  // search window around the target axis
    int threshold = 50;                // accumulator votes and supporting pixels
    int min_length = 0;                // 0: use the line element length
    int max_gap = 5;
    int band = 1;                      // pixels off the walk path still counted
    std::uint64_t seed = 0x5eed;
};

/// Progressive probabilistic Hough transform restricted to lines within
/// angle_tolerance of the axis implied by orientation. Deterministic for a
/// fixed seed.
std::vector<LineSegment> detect_segments(const BinaryImage& mask, Orientation orientation,
                                         const HoughParams& params = {});

/// Least-squares centreline of the mask pixels lying within band of the
/// segment's line and inside its axial extent, refitted iterations times.
/// The segment comes back unchanged when the pixels do not determine a line.
LineSegment refine_segment(const BinaryImage& mask, const LineSegment& seg, Orientation orientation,
                           double band = 3.0, int iterations = 2);

}  // namespace dictscan
