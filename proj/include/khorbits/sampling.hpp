#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string_view>
#include <vector>

#include "khorbits/dynamics.hpp"
#include "khorbits/rng.hpp"
#include "khorbits/symmetry.hpp"

// Reduction of the search space: rotation lets y(0) = 0, closure of the
// z-coordinate lets z(0) = 0, the dilations let x(0) = 1, and solving
// H = 0 for p_z leaves the surface parametrized by (p_x, p_y) with
// |p_x| <= 1/(2 sqrt(pi)). On that surface p_x(0) = J and p_y(0) = p_theta.

namespace khorbits {

/// Admissible half-width of the p_x strip, 1/(2 sqrt(pi)).
inline const double kPxBound = 0.5 / std::sqrt(std::numbers::pi);

/// A point of the reduced initial-condition surface.
struct ReducedIC {
    double px = 0.0;
    double py = 0.0;
    int branch = +1;  // sign of the square root in the p_z formula

    friend bool operator==(const ReducedIC&, const ReducedIC&) = default;
};

/// Embed into phase space at (1, 0, 0, p_x, p_y, p_z) with
/// p_z = -2 p_y +/- sqrt((1 - 4 pi p_x^2) / pi), which lies on {H = 0}.
inline PhaseState embed(const ReducedIC& ic) {
    const double disc = (1.0 - 4.0 * std::numbers::pi * ic.px * ic.px) / std::numbers::pi;
    if (disc < 0.0) throw std::domain_error("embed: |p_x| exceeds 1/(2 sqrt(pi))");
    const double root = std::sqrt(disc);
    const double pz = -2.0 * ic.py + (ic.branch >= 0 ? root : -root);
    return {1.0, 0.0, 0.0, ic.px, ic.py, pz};
}

/// Read (p_x, p_y) back from a state on the section x=1, y=z=0.
inline ReducedIC project_section(const PhaseState& s, int branch = +1) {
    return {s.px, s.py, branch};
}

/// Deterministic random starting condition on the zero-energy surface:
/// p_x uniform on the admissible strip, p_y uniform on [py_min, py_max),
/// positive branch.
inline ReducedIC random_ic(std::uint64_t seed, double py_min = 0.0, double py_max = 1.0) {
    Rng rng(seed);
    ReducedIC ic;
    ic.px = rng.uniform(-kPxBound, kPxBound);
    ic.py = rng.uniform(py_min, py_max);
    ic.branch = +1;
    return ic;
}

enum class ScanStatus : std::uint8_t {
    candidate,
    closed,
    abortive_timeout,
    abortive_collision,
    abortive_escape,
};

/// One sample of a parameter scan over the (p_theta, J) plane.
struct ScanRecord {
    double p_theta = 0.0;
    double j = 0.0;
    std::optional<double> objective;
    std::optional<double> period;
    std::optional<SymmetryType> symmetry;
    ScanStatus status = ScanStatus::abortive_timeout;

    friend bool operator==(const ScanRecord&, const ScanRecord&) = default;
};

const char* to_string(ScanStatus s);
std::optional<ScanStatus> scan_status_from_string(std::string_view s);

}  // namespace khorbits
