#pragma once

#include <iosfwd>

#include "khorbits/scan.hpp"
#include "khorbits/trajectory.hpp"

namespace khorbits {

struct SvgOptions {
    int width = 640;
    int height = 640;
    int margin = 48;
    std::size_t max_points = 4000;  ///< polylines are decimated beyond this
};

enum class Projection { xy, xz };

/// Orbit trace in the chosen coordinate plane. The xy view always contains
/// the origin and marks it with a dot (the sun sits there).
void write_orbit_svg(std::ostream& out, const Trajectory& traj, Projection proj,
                     const SvgOptions& opts = {});

/// Objective landscape over the scan plane, one cell per record: blue for
/// small objectives through red for large ones, yellow where the point
/// produced a candidate or closed orbit, gray where nothing returned.
void write_heatmap_svg(std::ostream& out, const PlaneSpec& spec, const std::vector<ScanRecord>& records,
                       const SvgOptions& opts = {});

}  // namespace khorbits
