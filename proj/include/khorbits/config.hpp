#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "khorbits/scan.hpp"

namespace khorbits {

/// Every tunable of the pipeline in one place. Files use `key = value`
/// lines with `#` comments; unknown keys are rejected so typos surface.
/// Seeds are deliberately not part of the file; they come from the caller.
struct Config {
    IntegratorConfig integrator;
    ShootingConfig shooting;
    OptimizerConfig optimizer;
    PlaneSpec plane;
    LineSpec line;
    std::size_t search_count = 10;
    double search_py_min = 0.0;
    double search_py_max = 0.5;
    std::size_t workers = 1;

    friend bool operator==(const Config&, const Config&);
};

/// Canonical text form: fixed key order, full-precision floats. Equal
/// configs serialize identically, so the hash below is stable.
std::string serialize(const Config& cfg);

Config parse_config(const std::string& text);
Config load_config(const std::filesystem::path& path);

/// FNV-1a over the canonical serialization.
std::uint64_t config_hash(const Config& cfg);

/// Full-precision (%.17g) float formatting shared by config and CSV output.
std::string format_double(double v);

}  // namespace khorbits
