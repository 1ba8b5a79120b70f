#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

namespace khorbits {

using Vec6 = std::array<double, 6>;

/// A point of the six-dimensional phase space T*H = (x, y, z, p_x, p_y, p_z).
struct PhaseState {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
    double px = 0.0;
    double py = 0.0;
    double pz = 0.0;

    Vec6 to_array() const { return {x, y, z, px, py, pz}; }
    static PhaseState from_array(const Vec6& v) { return {v[0], v[1], v[2], v[3], v[4], v[5]}; }

    friend bool operator==(const PhaseState&, const PhaseState&) = default;
};

/// The three conserved quantities of the flow: energy H, angular momentum
/// p_theta, dilational momentum J.
struct ConservedSet {
    double h = 0.0;
    double p_theta = 0.0;
    double j = 0.0;

    friend bool operator==(const ConservedSet&, const ConservedSet&) = default;
};

/// Collision with the sun: the potential was evaluated at (or numerically
/// indistinguishable from) the origin.
class SingularityError : public std::runtime_error {
  public:
    explicit SingularityError(double rho)
        : std::runtime_error("singular potential evaluation (rho = " + std::to_string(rho) + ")"), rho_(rho) {}
    double rho() const { return rho_; }

  private:
    double rho_;
};

inline double norm(const Vec6& v) {
    double s = 0.0;
    for (double c : v) s += c * c;
    return std::sqrt(s);
}

inline double distance(const PhaseState& a, const PhaseState& b) {
    const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
    const double dpx = a.px - b.px, dpy = a.py - b.py, dpz = a.pz - b.pz;
    return std::sqrt(dx * dx + dy * dy + dz * dz + dpx * dpx + dpy * dpy + dpz * dpz);
}

}  // namespace khorbits
