#include "khorbits/integrator.hpp"

#include <cmath>

namespace khorbits {

Trajectory integrate(const PhaseState& s, double duration, const IntegratorConfig& c,
                     const IntegrateOptions& opts) {
    if (duration < 0.0) throw std::invalid_argument("integrate: negative duration");
    const int stride = c.effective_stride();
    const double dt_sample = c.delta * stride;
    const auto n_samples = static_cast<std::size_t>(std::floor(duration / dt_sample)) + 1;

    Trajectory traj;
    traj.dt_sample = dt_sample;
    traj.states.reserve(n_samples);
    traj.states.push_back(s);
    traj.rho_min = rho(s);
    if (opts.record_conserved) {
        traj.conserved_trace.reserve(n_samples);
        traj.conserved_trace.push_back(conserved(s));
    }

    ExtendedState e = lift(s);
    const double abort_rho = opts.rho_abort;
    for (std::size_t i = 1; i < n_samples; ++i) {
        try {
            for (int k = 0; k < stride; ++k) {
                e = step_signed(e, c, c.delta);
                const double r = rho(e.a);
                if (r < traj.rho_min) traj.rho_min = r;
                if (r < abort_rho || r < kRhoGuard) {
                    traj.collided = true;
                    return traj;
                }
            }
        } catch (const SingularityError&) {
            traj.collided = true;
            return traj;
        }
        traj.states.push_back(e.a);
        if (opts.record_conserved) traj.conserved_trace.push_back(conserved(e.a));
    }
    return traj;
}

}  // namespace khorbits
