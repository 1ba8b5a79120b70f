#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <map>
#include <mutex>
#include <thread>
#include <vector>

#include "khorbits/optimizer.hpp"
#include "khorbits/sampling.hpp"

namespace khorbits {

/// Grid over the (p_theta, J) rectangle, sampled at cell centers so the
/// open-interval bounds are never hit. Points are ordered p_theta-major.
struct PlaneSpec {
    double p_theta_min = 0.0;
    double p_theta_max = 1.0;
    double j_min = -0.25;
    double j_max = 0.25;
    std::size_t n_p_theta = 50;
    std::size_t n_j = 50;

    std::size_t size() const { return n_p_theta * n_j; }
};

/// Evenly spaced cell centers along a fixed-J segment, increasing p_theta.
struct LineSpec {
    double p_theta_min = 0.0;
    double p_theta_max = 1.0;
    double j = 0.0;
    std::size_t n = 1000;
};

std::vector<ReducedIC> plane_points(const PlaneSpec& spec);
std::vector<ReducedIC> line_points(const LineSpec& spec);

struct ScanPointConfig {
    IntegratorConfig integrator;
    ShootingConfig shooting;
    OptimizerConfig optimizer;  ///< seed field is ignored; per-point seeds are derived
    std::uint64_t seed = 0;
    std::size_t workers = 1;  ///< 0 picks the hardware thread count
    bool refine = false;      ///< run the optimizer and symmetry detection on candidates
};

/// Assess (and with `refine`, polish and classify) a single scan point.
/// Never throws for dynamical failures; those become abortive records.
ScanRecord evaluate_scan_point(std::size_t index, const ReducedIC& ic, const ScanPointConfig& cfg);

/// evaluate_scan_point plus the refinement result and, when requested and
/// the point closed, the one-period trajectory behind the classification.
struct PointOutcome {
    ScanRecord record;
    std::optional<OrbitResult> result;   ///< present when refinement ran
    std::optional<Trajectory> orbit;     ///< present with keep_trajectory on closure
};

PointOutcome evaluate_scan_point_full(std::size_t index, const ReducedIC& ic, const ScanPointConfig& cfg,
                                      bool keep_trajectory = false);

/// One-period integration and symmetry detection for a closed result;
/// fills result.symmetry (left empty when the signal is ambiguous or
/// degenerate) and returns the slightly padded one-period trajectory, or
/// nothing when the re-integration hit the singularity.
std::optional<Trajectory> classify_closed(OrbitResult& result, const IntegratorConfig& icfg);

/// Evaluate jobs `first..first+count` on several threads, committing results
/// in index order no matter which thread finished first: whichever worker
/// supplies the next missing index flushes the run. Output streams written
/// from `commit` are therefore identical for every worker count.
template <class R>
std::vector<R> run_ordered(std::size_t first, std::size_t count, std::size_t workers,
                           const std::function<R(std::size_t)>& eval,
                           const std::function<void(std::size_t, const R&)>& commit) {
    std::vector<R> out(count);
    workers = std::min(std::max<std::size_t>(1, workers), std::max<std::size_t>(1, count));

    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            out[i] = eval(first + i);
            if (commit) commit(first + i, out[i]);
        }
        return out;
    }

    std::atomic<std::size_t> next{0};
    std::atomic<bool> stop{false};
    std::mutex mu;
    std::map<std::size_t, R> staged;
    std::size_t pending = 0;  // next local index to commit
    std::exception_ptr err;

    auto work = [&] {
        try {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count || stop.load()) return;
                R r = eval(first + i);
                std::lock_guard lock(mu);
                staged.emplace(i, std::move(r));
                while (!staged.empty() && staged.begin()->first == pending) {
                    out[pending] = std::move(staged.begin()->second);
                    staged.erase(staged.begin());
                    if (commit) commit(first + pending, out[pending]);
                    ++pending;
                }
            }
        } catch (...) {
            std::lock_guard lock(mu);
            if (!err) err = std::current_exception();
            stop.store(true);
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
    return out;
}

/// Evaluate points[first..] and return their records in order. `on_record`
/// runs in index order (see run_ordered), so it may append to a file.
std::vector<ScanRecord> run_scan(const std::vector<ReducedIC>& points, const ScanPointConfig& cfg,
                                 const std::function<void(std::size_t, const ScanRecord&)>& on_record = {},
                                 std::size_t first = 0);

}  // namespace khorbits
