#include "khorbits/optimizer.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "khorbits/rng.hpp"

namespace khorbits {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Objective of the embedded point over a fixed window. Collisions and
/// windows without a recurrence score +inf.
std::pair<double, std::optional<ObjectiveValue>> evaluate(const ReducedIC& ic, double duration,
                                                          const IntegratorConfig& icfg,
                                                          const ShootingConfig& scfg) {
    PhaseState s0;
    try {
        s0 = embed(ic);
    } catch (const std::domain_error&) {
        return {kInf, std::nullopt};
    }
    IntegrateOptions opts;
    opts.rho_abort = scfg.collision_rho;
    Trajectory traj;
    try {
        traj = integrate(s0, duration, icfg, opts);
    } catch (const SingularityError&) {
        return {kInf, std::nullopt};
    }
    if (traj.collided) return {kInf, std::nullopt};
    const auto obj = objective(traj, s0, scfg.warmup_frac * duration);
    if (!obj) return {kInf, std::nullopt};
    return {obj->value, obj};
}

ReducedIC propose(const ReducedIC& base, Rng& rng, const OptimizerConfig& cfg) {
    const double log_lo = std::log(cfg.inner_radius);
    const double log_hi = std::log(cfg.outer_radius);
    for (int attempt = 0; attempt < 10000; ++attempt) {
        const double r = std::exp(rng.uniform(log_lo, log_hi));
        const double phi = rng.uniform(0.0, 2.0 * std::numbers::pi);
        ReducedIC next = base;
        next.px += r * std::cos(phi);
        next.py += r * std::sin(phi);
        if (std::abs(next.px) < kPxBound) return next;
    }
    throw std::runtime_error("propose: no embeddable step found");
}

}  // namespace

OrbitResult optimize(const ReducedIC& start, const OptimizerConfig& ocfg,
                     const IntegratorConfig& icfg, const ShootingConfig& scfg, double duration) {
    if (ocfg.inner_radius <= 0.0 || ocfg.outer_radius < ocfg.inner_radius)
        throw std::invalid_argument("optimize: bad radius bounds");

    OrbitResult result;
    result.initial = start;

    if (duration <= 0.0) {
        const auto outcome = assess(embed(start), icfg, scfg);
        ++result.eval_count;
        // The candidate threshold triages a random search; an explicit
        // refinement request only gives up when the start cannot close at
        // all: nonzero J (escape or collision) or no recurrence minima.
        const bool refinable = outcome.is_candidate() ||
                               (outcome.reason == AbortReason::timeout && outcome.objective);
        if (!refinable) {
            result.failed = true;
            result.abort_reason = outcome.reason;
            result.duration_used = outcome.duration;
            return result;
        }
        duration = outcome.duration;
        result.objective = outcome.objective;
        result.history.push_back(outcome.objective->value);
    } else {
        const auto [value, obj] = evaluate(start, duration, icfg, scfg);
        ++result.eval_count;
        result.objective = obj;
        result.history.push_back(value);
    }
    result.duration_used = duration;

    double best = result.history.back();
    ReducedIC best_ic = start;
    bool extended = false;

    Rng rng(ocfg.seed);
    for (std::size_t it = 0; it < ocfg.iterations; ++it) {
        const ReducedIC trial = propose(best_ic, rng, ocfg);
        const auto [value, obj] = evaluate(trial, duration, icfg, scfg);
        ++result.eval_count;
        if (value < best) {
            best = value;
            best_ic = trial;
            result.objective = obj;
            result.history.push_back(value);
            if (!extended && obj && obj->t_star > 0.85 * duration) {
                // Recurrence drifting into the tail; widen the window once
                // so the true minimum is not clipped.
                extended = true;
                duration *= 1.25;
                result.duration_used = duration;
                const auto [re_value, re_obj] = evaluate(best_ic, duration, icfg, scfg);
                ++result.eval_count;
                best = re_value;
                result.objective = re_obj;
            }
        }
    }

    result.initial = best_ic;
    if (result.objective && result.objective->value < ocfg.closure_tol)
        result.period = result.objective->t_star;
    return result;
}

}  // namespace khorbits
