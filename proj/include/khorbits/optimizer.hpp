#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "khorbits/integrator.hpp"
#include "khorbits/sampling.hpp"
#include "khorbits/shooting.hpp"
#include "khorbits/symmetry.hpp"

namespace khorbits {

/// Random-walk refinement of a section point: propose annulus steps in
/// (px, py), keep a step only when the closure objective strictly improves.
struct OptimizerConfig {
    double outer_radius = 1e-1;   ///< largest proposal step
    double inner_radius = 1e-12;  ///< smallest proposal step
    std::size_t iterations = 1000;
    std::uint64_t seed = 0;
    double closure_tol = 1e-3;  ///< objective below this counts as closed
};

struct OrbitResult {
    ReducedIC initial{};  ///< refined section point (best found)
    std::optional<ObjectiveValue> objective;
    std::optional<double> period;  ///< set iff objective < closure_tol
    std::optional<SymmetryType> symmetry;
    std::vector<double> history;  ///< initial objective, then each accepted value
    double duration_used = 0.0;
    bool failed = false;  ///< initial point never produced a candidate
    std::optional<AbortReason> abort_reason;  ///< set when failed
    std::size_t eval_count = 0;

    bool closed() const { return period.has_value(); }
};

/// Refine `start`. When `duration` is zero the assessment loop picks the
/// integration window; otherwise the given window is used as-is. The window
/// is frozen during refinement apart from a single 25% extension when the
/// best recurrence time drifts too close to the end.
OrbitResult optimize(const ReducedIC& start, const OptimizerConfig& ocfg,
                     const IntegratorConfig& icfg = {}, const ShootingConfig& scfg = {},
                     double duration = 0.0);

}  // namespace khorbits
