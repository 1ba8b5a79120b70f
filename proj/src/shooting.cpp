#include "khorbits/shooting.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace khorbits {

namespace {

std::vector<double> distance_series(const Trajectory& traj, const PhaseState& s0) {
    std::vector<double> d(traj.size());
    for (std::size_t i = 0; i < traj.size(); ++i) d[i] = distance_sq(traj.states[i], s0);
    return d;
}

// Interior strict local minima of d at sample times past warmup.
std::vector<std::size_t> local_minima(const std::vector<double>& d, double dt, double t0, double warmup) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 1; i + 1 < d.size(); ++i) {
        if (t0 + static_cast<double>(i) * dt <= warmup) continue;
        if (d[i] < d[i - 1] && d[i] < d[i + 1]) idx.push_back(i);
    }
    return idx;
}

double parabolic_time(const std::vector<double>& d, std::size_t i, double dt, double t0) {
    const double den = d[i - 1] - 2.0 * d[i] + d[i + 1];
    double shift = 0.0;
    if (den > 0.0) shift = 0.5 * (d[i - 1] - d[i + 1]) / den;
    shift = std::clamp(shift, -0.5, 0.5);
    return t0 + (static_cast<double>(i) + shift) * dt;
}

}  // namespace

std::optional<ObjectiveValue> objective(const Trajectory& traj, const PhaseState& s0, double warmup) {
    if (traj.size() < 3) return std::nullopt;
    const auto d = distance_series(traj, s0);
    const auto minima = local_minima(d, traj.dt_sample, traj.t0, warmup);
    if (minima.empty()) return std::nullopt;
    std::size_t best = minima.front();
    for (std::size_t i : minima)
        if (d[i] < d[best]) best = i;
    return ObjectiveValue{d[best], parabolic_time(d, best, traj.dt_sample, traj.t0)};
}

AssessOutcome assess(const PhaseState& s0, const IntegratorConfig& icfg, const ShootingConfig& scfg) {
    const double j0 = conserved(s0).j;
    const double esc_sq = scfg.escape_radius * scfg.escape_radius;

    AssessOutcome out;
    double t = std::min(scfg.t_init, scfg.t_max);
    for (;;) {
        IntegrateOptions opts;
        opts.rho_abort = scfg.collision_rho;
        Trajectory traj = integrate(s0, t, icfg, opts);

        out.duration = t;
        if (traj.collided) {
            out.status = AssessOutcome::Status::abortive;
            out.reason = AbortReason::collision;
            out.objective = objective(traj, s0, scfg.warmup_frac * t);
            out.trajectory = std::move(traj);
            return out;
        }

        const auto d = distance_series(traj, s0);
        const auto minima = local_minima(d, traj.dt_sample, traj.t0, scfg.warmup_frac * t);
        std::optional<ObjectiveValue> obj;
        if (!minima.empty()) {
            std::size_t best = minima.front();
            for (std::size_t i : minima)
                if (d[i] < d[best]) best = i;
            obj = ObjectiveValue{d[best], parabolic_time(d, best, traj.dt_sample, traj.t0)};
        }
        if (!out.objective || (obj && obj->value < out.objective->value)) out.objective = obj ? obj : out.objective;

        if (obj && obj->value < scfg.threshold) {
            out.status = AssessOutcome::Status::candidate;
            out.objective = obj;
            out.trajectory = std::move(traj);
            return out;
        }

        const bool left_radius = *std::max_element(d.begin(), d.end()) > esc_sq;
        if (left_radius || t >= scfg.t_max) {
            out.status = AssessOutcome::Status::abortive;
            // J is conserved on the energy surface and measures dilation:
            // J > 0 dilates outward without bound, J < 0 spirals into the
            // sun (a close pass the fixed step cannot resolve may scatter
            // the numerical orbit outward afterwards, so the sign of J at
            // launch is the reliable witness, not the late-time radius).
            if (j0 > scfg.j_tol)
                out.reason = AbortReason::escape;
            else if (j0 < -scfg.j_tol)
                out.reason = AbortReason::collision;
            else
                out.reason = AbortReason::timeout;
            out.trajectory = std::move(traj);
            return out;
        }
        t = std::min(2.0 * t, scfg.t_max);
    }
}

double period_estimate(const ObjectiveValue& o, double closure_tol) {
    if (!(o.value < closure_tol))
        throw std::invalid_argument("period_estimate: objective above closure tolerance");
    return o.t_star;
}

}  // namespace khorbits
