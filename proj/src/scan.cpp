#include "khorbits/scan.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "khorbits/rng.hpp"

namespace khorbits {

namespace {

void require_embeddable(const std::vector<ReducedIC>& pts) {
    for (const auto& p : pts)
        if (!(std::abs(p.px) < kPxBound))
            throw std::invalid_argument("scan grid leaves the admissible p_x strip");
}

}  // namespace

std::vector<ReducedIC> plane_points(const PlaneSpec& spec) {
    if (spec.n_p_theta == 0 || spec.n_j == 0) throw std::invalid_argument("plane_points: empty grid");
    if (!(spec.p_theta_min < spec.p_theta_max) || !(spec.j_min < spec.j_max))
        throw std::invalid_argument("plane_points: bad bounds");
    std::vector<ReducedIC> pts;
    pts.reserve(spec.size());
    const double dp = (spec.p_theta_max - spec.p_theta_min) / static_cast<double>(spec.n_p_theta);
    const double dj = (spec.j_max - spec.j_min) / static_cast<double>(spec.n_j);
    for (std::size_t ip = 0; ip < spec.n_p_theta; ++ip)
        for (std::size_t ij = 0; ij < spec.n_j; ++ij)
            pts.push_back({spec.j_min + (static_cast<double>(ij) + 0.5) * dj,
                           spec.p_theta_min + (static_cast<double>(ip) + 0.5) * dp, +1});
    require_embeddable(pts);
    return pts;
}

std::vector<ReducedIC> line_points(const LineSpec& spec) {
    if (spec.n == 0) throw std::invalid_argument("line_points: empty grid");
    if (!(spec.p_theta_min < spec.p_theta_max)) throw std::invalid_argument("line_points: bad bounds");
    std::vector<ReducedIC> pts;
    pts.reserve(spec.n);
    const double dp = (spec.p_theta_max - spec.p_theta_min) / static_cast<double>(spec.n);
    for (std::size_t i = 0; i < spec.n; ++i)
        pts.push_back({spec.j, spec.p_theta_min + (static_cast<double>(i) + 0.5) * dp, +1});
    require_embeddable(pts);
    return pts;
}

std::optional<Trajectory> classify_closed(OrbitResult& result, const IntegratorConfig& icfg) {
    if (!result.closed()) throw std::invalid_argument("classify_closed: result is not closed");
    const double period = *result.period;
    const double margin = 2.0 * icfg.delta * static_cast<double>(icfg.effective_stride());
    Trajectory traj;
    try {
        traj = integrate(embed(result.initial), period + margin, icfg, {});
        if (traj.collided) return std::nullopt;
        result.symmetry = detect_type(resample_period(traj, period, kResampleLength));
    } catch (const DegenerateSignalError&) {
        // planar or collapsing solution; leave the type unset
    } catch (const AmbiguousTypeError&) {
    } catch (const SingularityError&) {
        return std::nullopt;
    }
    return traj;
}

PointOutcome evaluate_scan_point_full(std::size_t index, const ReducedIC& ic, const ScanPointConfig& cfg,
                                      bool keep_trajectory) {
    PointOutcome po;
    ScanRecord& rec = po.record;
    rec.p_theta = ic.py;
    rec.j = ic.px;

    const auto outcome = assess(embed(ic), cfg.integrator, cfg.shooting);
    // Points that never recur within threshold can still be pulled closed
    // by the random walk, so with refinement on, a timeout that produced an
    // objective gets the same treatment as a candidate.
    const bool refinable = outcome.is_candidate() ||
                           (outcome.reason == AbortReason::timeout && outcome.objective);
    if (!outcome.is_candidate()) {
        switch (outcome.reason) {
            case AbortReason::timeout: rec.status = ScanStatus::abortive_timeout; break;
            case AbortReason::collision: rec.status = ScanStatus::abortive_collision; break;
            case AbortReason::escape: rec.status = ScanStatus::abortive_escape; break;
        }
        if (outcome.objective) rec.objective = outcome.objective->value;
    } else {
        rec.status = ScanStatus::candidate;
        rec.objective = outcome.objective->value;
    }
    if (!cfg.refine || !refinable) return po;

    OptimizerConfig ocfg = cfg.optimizer;
    ocfg.seed = Rng::derive(cfg.seed, static_cast<std::uint64_t>(index));
    OrbitResult result = optimize(ic, ocfg, cfg.integrator, cfg.shooting, outcome.duration);
    if (result.objective) {
        rec.objective = result.objective->value;
        if (result.objective->value < cfg.shooting.threshold)
            rec.status = ScanStatus::candidate;
    }
    if (result.closed()) {
        rec.status = ScanStatus::closed;
        rec.period = result.period;
        auto orbit = classify_closed(result, cfg.integrator);
        rec.symmetry = result.symmetry;
        if (keep_trajectory && orbit) po.orbit = std::move(orbit);
    }
    po.result = std::move(result);
    return po;
}

ScanRecord evaluate_scan_point(std::size_t index, const ReducedIC& ic, const ScanPointConfig& cfg) {
    return evaluate_scan_point_full(index, ic, cfg, false).record;
}

std::vector<ScanRecord> run_scan(const std::vector<ReducedIC>& points, const ScanPointConfig& cfg,
                                 const std::function<void(std::size_t, const ScanRecord&)>& on_record,
                                 std::size_t first) {
    if (first > points.size()) throw std::invalid_argument("run_scan: first index past the end");
    const std::size_t workers = cfg.workers != 0
                                    ? cfg.workers
                                    : std::max<std::size_t>(1, std::thread::hardware_concurrency());
    const std::function<ScanRecord(std::size_t)> eval = [&](std::size_t i) {
        return evaluate_scan_point(i, points[i], cfg);
    };
    return run_ordered<ScanRecord>(first, points.size() - first, workers, eval, on_record);
}

}  // namespace khorbits
