#pragma once

#include <cmath>
#include <numbers>

#include "khorbits/state.hpp"

// The Kepler problem on the Heisenberg group: sub-Riemannian kinetic energy
// plus the fundamental solution of the sub-Laplacian as gravitational
// potential,
//
//   H = 1/2 (P_X^2 + P_Y^2) - 1 / (8 pi sqrt((x^2+y^2)^2 + 16 z^2))
//
// with the dual momenta P_X = p_x - y p_z / 2 and P_Y = p_y + x p_z / 2.
// Everything here is a pure function of the state; partial derivatives are
// closed-form since the integrator calls them in its innermost loop.

namespace khorbits {

inline constexpr double kPotentialStrength = 1.0 / (8.0 * std::numbers::pi);

// Below this value of rho the state counts as a collision with the sun.
inline constexpr double kRhoGuard = 1e-30;

/// Singularity gauge rho(q) = (x^2+y^2)^2 + 16 z^2; zero exactly at the sun.
inline double rho(const PhaseState& s) {
    const double r2 = s.x * s.x + s.y * s.y;
    return r2 * r2 + 16.0 * s.z * s.z;
}

/// Dual momentum to the frame field X.
inline double momentum_x(const PhaseState& s) { return s.px - 0.5 * s.y * s.pz; }
/// Dual momentum to the frame field Y.
inline double momentum_y(const PhaseState& s) { return s.py + 0.5 * s.x * s.pz; }

inline double kinetic(const PhaseState& s) {
    const double pX = momentum_x(s);
    const double pY = momentum_y(s);
    return 0.5 * (pX * pX + pY * pY);
}

inline double potential(const PhaseState& s) {
    const double r = rho(s);
    if (r < kRhoGuard) throw SingularityError(r);
    return -kPotentialStrength / std::sqrt(r);
}

inline double hamiltonian(const PhaseState& s) { return kinetic(s) + potential(s); }

/// Closed-form gradient (dH/dx, dH/dy, dH/dz, dH/dp_x, dH/dp_y, dH/dp_z).
inline Vec6 grad_hamiltonian(const PhaseState& s) {
    const double pX = momentum_x(s);
    const double pY = momentum_y(s);
    const double r2 = s.x * s.x + s.y * s.y;
    const double r = r2 * r2 + 16.0 * s.z * s.z;
    if (r < kRhoGuard) throw SingularityError(r);
    // d/dq of -alpha rho^{-1/2} is (alpha/2) rho^{-3/2} drho/dq.
    const double w = kPotentialStrength / (r * std::sqrt(r));
    return {
        0.5 * s.pz * pY + 2.0 * s.x * r2 * w,
        -0.5 * s.pz * pX + 2.0 * s.y * r2 * w,
        16.0 * s.z * w,
        pX,
        pY,
        0.5 * (s.x * pY - s.y * pX),
    };
}

/// Hamiltonian vector field (xdot, ydot, zdot, pxdot, pydot, pzdot).
/// Solutions automatically satisfy the horizontal constraint
/// zdot = (x ydot - y xdot) / 2.
inline Vec6 vector_field(const PhaseState& s) {
    const Vec6 g = grad_hamiltonian(s);
    return {g[3], g[4], g[5], -g[0], -g[1], -g[2]};
}

inline ConservedSet conserved(const PhaseState& s) {
    return {
        hamiltonian(s),
        s.x * s.py - s.y * s.px,
        s.x * s.px + s.y * s.py + 2.0 * s.z * s.pz,
    };
}

/// Carnot dilation lifted to phase space:
/// (x, y, z, p) -> (lx, ly, l^2 z, p_x/l, p_y/l, p_z/l^2).
/// Rescales energy by l^-2 and preserves p_theta and J.
inline PhaseState dilate(const PhaseState& s, double lambda) {
    if (!(lambda > 0.0)) throw std::domain_error("dilate: lambda must be positive");
    const double l2 = lambda * lambda;
    return {lambda * s.x, lambda * s.y, l2 * s.z, s.px / lambda, s.py / lambda, s.pz / l2};
}

}  // namespace khorbits
