#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "khorbits/optimizer.hpp"
#include "khorbits/sampling.hpp"
#include "khorbits/trajectory.hpp"

namespace khorbits {

inline constexpr char kArchiveMagic[8] = {'K', 'H', 'O', 'R', 'B', 'I', 'T', 'S'};
inline constexpr std::uint32_t kArchiveVersion = 1;
inline constexpr std::uint32_t kArchiveEndianTag = 0x01020304u;

/// Everything a run produced, in one self-describing binary file. Floats
/// are stored bit-exactly, so load(save(a)) == a.
struct Archive {
    std::uint32_t version = kArchiveVersion;
    std::string config_text;
    std::string rng_algorithm;
    std::uint64_t seed = 0;
    std::vector<OrbitResult> results;
    std::vector<ScanRecord> records;

    struct LabeledTrajectory {
        std::string label;
        double period = 0.0;  ///< 0 when unknown; else the stored span covers one period
        Trajectory trajectory;
    };
    std::vector<LabeledTrajectory> trajectories;
};

void save_archive(const std::filesystem::path& path, const Archive& archive);
Archive load_archive(const std::filesystem::path& path);

}  // namespace khorbits
