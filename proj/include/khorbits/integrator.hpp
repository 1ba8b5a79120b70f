#pragma once

#include <cmath>
#include <numbers>

#include "khorbits/dynamics.hpp"
#include "khorbits/trajectory.hpp"

// Fixed-step symplectic integration for the nonseparable Hamiltonian, using
// the extended-phase-space splitting: two bound copies (q, p) and (qt, pt)
// evolve under H(q, pt) and H(qt, p), glued by an exact rotation of the
// difference variables. The composition used here is the symmetric
// second-order one,
//
//   A(d/2) B(d/2) C(d) B(d/2) A(d/2)
//
// where A is the flow of H(q, pt), B the flow of H(qt, p) and C the coupling
// rotation by angle 2*omega*d.

namespace khorbits {

/// Two bound copies of phase space.
struct ExtendedState {
    PhaseState a;  // (q, p)
    PhaseState b;  // (qt, pt)

    /// Copy-binding defect |q - qt| + |p - pt|.
    double defect() const {
        const double dq = std::sqrt((a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y) +
                                    (a.z - b.z) * (a.z - b.z));
        const double dp = std::sqrt((a.px - b.px) * (a.px - b.px) + (a.py - b.py) * (a.py - b.py) +
                                    (a.pz - b.pz) * (a.pz - b.pz));
        return dq + dp;
    }
};

struct IntegratorConfig {
    double delta = 1e-3;         // time step
    double omega = 0.0;          // coupling strength; 0 requests pi/(4*delta)
    std::size_t record_stride = 0;  // samples stored every stride steps; 0 = auto

    /// The coupling map is periodic in omega*delta, so only the rotation
    /// angle matters; pi/(4*delta) makes it the quarter-turn swap of the
    /// difference variables (maximal mixing of the two copies).
    double effective_omega() const { return omega > 0.0 ? omega : std::numbers::pi / (4.0 * delta); }

    /// Default stride keeps stored samples at most 1e-2 apart.
    int effective_stride() const {
        if (record_stride >= 1) return static_cast<int>(record_stride);
        const int s = static_cast<int>(1e-2 / delta + 0.5);
        return s < 1 ? 1 : s;
    }
};

struct IntegrateOptions {
    bool record_conserved = false;
    /// Abort (and flag the trajectory as collided) when rho drops below this.
    /// 0 leaves only the hard singularity guard active.
    double rho_abort = 0.0;
};

inline ExtendedState lift(const PhaseState& s) { return {s, s}; }
inline PhaseState project(const ExtendedState& e) { return e.a; }

namespace detail {

// Flow of H(q, pt) for time h: kicks p, drifts qt; q and pt are unchanged,
// so the map is exact.
inline void flow_a(ExtendedState& e, double h) {
    const Vec6 g = grad_hamiltonian({e.a.x, e.a.y, e.a.z, e.b.px, e.b.py, e.b.pz});
    e.a.px -= h * g[0];
    e.a.py -= h * g[1];
    e.a.pz -= h * g[2];
    e.b.x += h * g[3];
    e.b.y += h * g[4];
    e.b.z += h * g[5];
}

// Flow of H(qt, p) for time h: drifts q, kicks pt.
inline void flow_b(ExtendedState& e, double h) {
    const Vec6 g = grad_hamiltonian({e.b.x, e.b.y, e.b.z, e.a.px, e.a.py, e.a.pz});
    e.a.x += h * g[3];
    e.a.y += h * g[4];
    e.a.z += h * g[5];
    e.b.px -= h * g[0];
    e.b.py -= h * g[1];
    e.b.pz -= h * g[2];
}

// Exact coupling flow: rotate (q - qt, p - pt) by `angle` with the means
// held fixed.
inline void flow_c(ExtendedState& e, double angle) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    const auto mix = [c, s](double& ua, double& ub, double& va, double& vb) {
        const double du = ua - ub, dv = va - vb;
        const double mu = 0.5 * (ua + ub), mv = 0.5 * (va + vb);
        const double ru = c * du + s * dv;
        const double rv = -s * du + c * dv;
        ua = mu + 0.5 * ru;
        ub = mu - 0.5 * ru;
        va = mv + 0.5 * rv;
        vb = mv - 0.5 * rv;
    };
    mix(e.a.x, e.b.x, e.a.px, e.b.px);
    mix(e.a.y, e.b.y, e.a.py, e.b.py);
    mix(e.a.z, e.b.z, e.a.pz, e.b.pz);
}

}  // namespace detail

/// One step of signed size h. Negating h inverts the map to roundoff.
inline ExtendedState step_signed(ExtendedState e, const IntegratorConfig& c, double h) {
    const double half = 0.5 * h;
    detail::flow_a(e, half);
    detail::flow_b(e, half);
    detail::flow_c(e, 2.0 * c.effective_omega() * h);
    detail::flow_b(e, half);
    detail::flow_a(e, half);
    return e;
}

/// One forward step of size c.delta.
inline ExtendedState step(const ExtendedState& e, const IntegratorConfig& c) {
    return step_signed(e, c, c.delta);
}

/// Integrate for `duration`, sampling copy A every record_stride steps.
/// A singular (or rho_abort) encounter terminates integration; the partial
/// trajectory is returned with the collided flag set.
Trajectory integrate(const PhaseState& s, double duration, const IntegratorConfig& c,
                     const IntegrateOptions& opts = {});

}  // namespace khorbits
