#pragma once

#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "khorbits/state.hpp"

namespace khorbits {

/// Uniformly sampled time series of phase states. `conserved_trace`, when
/// recorded, is parallel to `states`.
struct Trajectory {
    double t0 = 0.0;
    double dt_sample = 0.0;
    std::vector<PhaseState> states;
    std::vector<ConservedSet> conserved_trace;
    bool collided = false;
    double rho_min = std::numeric_limits<double>::infinity();

    std::size_t size() const { return states.size(); }
    double time_at(std::size_t i) const { return t0 + static_cast<double>(i) * dt_sample; }
    double duration() const { return states.empty() ? 0.0 : static_cast<double>(states.size() - 1) * dt_sample; }

    /// Linear interpolation between samples; t must lie within [t0, t0 + duration].
    PhaseState state_at(double t) const {
        if (states.empty()) throw std::logic_error("state_at: empty trajectory");
        if (states.size() == 1 || dt_sample <= 0.0) return states.front();
        const double u = (t - t0) / dt_sample;
        if (u <= 0.0) return states.front();
        const double last = static_cast<double>(states.size() - 1);
        if (u >= last) return states.back();
        const auto i = static_cast<std::size_t>(u);
        const double f = u - static_cast<double>(i);
        const PhaseState& a = states[i];
        const PhaseState& b = states[i + 1];
        return {a.x + f * (b.x - a.x),   a.y + f * (b.y - a.y),   a.z + f * (b.z - a.z),
                a.px + f * (b.px - a.px), a.py + f * (b.py - a.py), a.pz + f * (b.pz - a.pz)};
    }
};

}  // namespace khorbits
