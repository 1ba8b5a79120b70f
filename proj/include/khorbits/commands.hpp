#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "khorbits/config.hpp"
#include "khorbits/optimizer.hpp"

// The subcommands as plain library functions, so tests drive exactly the
// code the executable runs. Each writes its artifacts under `out_dir` and
// returns a process exit code.

namespace khorbits {

struct RunContext {
    Config config;
    std::filesystem::path out_dir = "out";
    std::uint64_t seed = 0;
};

/// Remove time-of-run lines (generated_at, wall_time_s) so two outputs can
/// be compared byte for byte.
std::string strip_volatile_lines(const std::string& text);

/// The full treatment of one section point: assess, random-walk refinement,
/// and on closure a one-period integration with symmetry classification.
OrbitResult refine_and_classify(const ReducedIC& start, const Config& cfg, std::uint64_t seed);

/// Draw `search.count` random points on the zero-energy surface and give
/// each the full treatment. Writes records.csv, summary.txt, archive.bin
/// and one file per abortive point under abortive/.
int cmd_search(const RunContext& ctx, std::uint64_t seed);

/// Refine a single explicit starting point.
int cmd_optimize(const RunContext& ctx, double px, double py);

/// Coarse survey of the (p_theta, J) plane (no refinement). Writes
/// records.csv, heatmap.svg, summary.txt, archive.bin; resumable.
int cmd_scan_plane(const RunContext& ctx);

/// Refined scan along a fixed-J line with symmetry types. Writes
/// records.csv, summary.txt, archive.bin; resumable.
int cmd_scan_line(const RunContext& ctx);

/// Re-run symmetry detection on every trajectory stored in an archive.
int cmd_detect(const RunContext& ctx, const std::filesystem::path& archive_path);

/// Render the xy and xz traces of every archived trajectory, and the
/// objective heat map when the archive holds a full plane of records.
int cmd_plot(const RunContext& ctx, const std::filesystem::path& archive_path);

}  // namespace khorbits
