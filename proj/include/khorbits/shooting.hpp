#pragma once

#include <optional>

#include "khorbits/integrator.hpp"

// Shooting-method objective: the smallest local minimum of the squared
// phase-space distance from the initial condition, plus the time-extension
// loop that sorts starting conditions into candidates and abortives.

namespace khorbits {

struct ObjectiveValue {
    double value = 0.0;   // squared distance at the chosen local minimum
    double t_star = 0.0;  // parabola-refined time of that minimum
};

enum class AbortReason { timeout, collision, escape };

struct AssessOutcome {
    enum class Status { candidate, abortive };
    Status status = Status::abortive;
    AbortReason reason = AbortReason::timeout;  // meaningful for abortive outcomes
    double duration = 0.0;                      // integration time of the deciding run
    std::optional<ObjectiveValue> objective;    // best objective seen, if any
    Trajectory trajectory;                      // the deciding run, for persistence and plots

    bool is_candidate() const { return status == Status::candidate; }
};

struct ShootingConfig {
    double threshold = 0.1;      // candidate acceptance: objective below this
    double t_init = 10.0;        // first integration time; doubled on failure
    double t_max = 200.0;        // give up past this integration time
    double warmup_frac = 0.01;   // ignore local minima before this fraction of the duration
    double escape_radius = 1e3;  // phase distance from s0 that ends the run
    double collision_rho = 1e-6; // rho below this classifies as collision
    double j_tol = 1e-4;         // |J| below this is treated as zero when calling escapes
};

/// Squared Euclidean distance over all six phase-space coordinates.
inline double distance_sq(const PhaseState& s, const PhaseState& s0) {
    const double d = distance(s, s0);
    return d * d;
}

/// Smallest strict interior local minimum of d^2(t) past `warmup`; the time
/// is refined by a parabola through the three samples around the minimum.
/// Absence of minima (monotone escape) is a valid outcome, not an error.
std::optional<ObjectiveValue> objective(const Trajectory& traj, const PhaseState& s0, double warmup);

/// Integrate s0 for t_init and test the objective against the threshold;
/// double the time and repeat until t_max. Failures are classified as
/// collision (rho dipped below collision_rho), escape (left the escape
/// radius, or positive-J growth of the return distance) or timeout.
AssessOutcome assess(const PhaseState& s0, const IntegratorConfig& icfg, const ShootingConfig& scfg);

/// The period of a closed orbit is the time of its near-return.
/// Requires the objective to be below `closure_tol`.
double period_estimate(const ObjectiveValue& o, double closure_tol);

}  // namespace khorbits
