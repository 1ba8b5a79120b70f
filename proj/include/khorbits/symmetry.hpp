#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "khorbits/trajectory.hpp"

// Symmetry detection for closed orbits. For an orbit of period T satisfying
// q(t + T/k) = w^j q(t) (w the rotation by 2 pi / k about the z-axis), the
// z-coordinate has fundamental frequency k cycles per period, and the
// spectrum of x + iy is supported on signed frequencies congruent to j mod k.
// The order k is the dominant mode of z; the class j is the argmax of the
// class signal, the mod-k average of the coefficient norms of x + iy.

namespace khorbits {

/// Reduced rational j/k in (0, 1]; 1/1 stands for a closed orbit without
/// rotational symmetry.
struct SymmetryType {
    unsigned j = 1;
    unsigned k = 1;

    double value() const { return static_cast<double>(j) / static_cast<double>(k); }
    std::string str() const { return std::to_string(j) + "/" + std::to_string(k); }

    friend bool operator==(const SymmetryType&, const SymmetryType&) = default;
    friend bool operator<(const SymmetryType& a, const SymmetryType& b) {
        return static_cast<unsigned long long>(a.j) * b.k < static_cast<unsigned long long>(b.j) * a.k;
    }
};

/// Make j/k reduced, with j = k collapsing to 1/1.
SymmetryType reduced(unsigned j, unsigned k);

/// Coefficient norms of the transform of x + iy averaged over residue
/// classes mod k; index = residue of the signed frequency.
struct ClassSignal {
    std::vector<double> values;
};

/// z was flat: no rotational signal to read an order from.
class DegenerateSignalError : public std::runtime_error {
  public:
    DegenerateSignalError() : std::runtime_error("degenerate signal: z is identically zero") {}
};

/// Top class-signal entries too close to call; refuse rather than misreport.
class AmbiguousTypeError : public std::runtime_error {
  public:
    explicit AmbiguousTypeError(const std::string& what) : std::runtime_error(what) {}
};

/// Number of uniform samples trajectories are resampled to before transforms.
inline constexpr std::size_t kResampleLength = 4096;

/// Interpolate one period [0, T) of `traj` onto n uniform samples.
/// Requires T <= traj.duration().
Trajectory resample_period(const Trajectory& traj, double period, std::size_t n = kResampleLength);

/// Symmetry order: the absolute frequency (cycles per period) of the
/// maximal-norm nonzero mode of z(t). Input must span exactly one period.
unsigned detect_order(const Trajectory& one_period);

/// Class signal of the xy-curve for a given order k.
ClassSignal class_signal(const Trajectory& one_period, unsigned k);

/// Full type detection: order from z, class from the class signal, reduced.
SymmetryType detect_type(const Trajectory& one_period);

/// Max deviation over samples of q(t + T/k) from the rotation of q(t) by
/// 2 pi j / k about the z-axis (positions only).
double verify_symmetry(const Trajectory& one_period, const SymmetryType& type);

/// All reduced fractions j/k in (0, 1] with k <= n, ascending.
std::vector<SymmetryType> farey_sequence(unsigned n);

/// The same sequence descending; symmetry types appear in this order as
/// p_theta grows.
std::vector<SymmetryType> farey_reversed(unsigned n);

}  // namespace khorbits
