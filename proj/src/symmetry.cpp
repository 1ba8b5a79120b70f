#include "khorbits/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>

namespace khorbits {

namespace {

using cdouble = std::complex<double>;

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// In-place iterative radix-2 transform; n must be a power of two.
void fft(std::vector<cdouble>& a) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, rev = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; rev & bit; bit >>= 1) rev ^= bit;
        rev ^= bit;
        if (i < rev) std::swap(a[i], a[rev]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = -2.0 * std::numbers::pi / static_cast<double>(len);
        const cdouble wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            cdouble w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const cdouble u = a[i + k];
                const cdouble v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

// The ops below assume the input spans exactly one period. Re-grid to a
// power of two when the caller handed us something else.
Trajectory as_pow2_period(const Trajectory& traj) {
    if (is_pow2(traj.size())) return traj;
    return resample_period(traj, static_cast<double>(traj.size()) * traj.dt_sample, kResampleLength);
}

std::vector<double> mode_norms(std::vector<cdouble> a) {
    fft(a);
    std::vector<double> norms(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) norms[i] = std::abs(a[i]);
    return norms;
}

}  // namespace

SymmetryType reduced(unsigned j, unsigned k) {
    if (j == 0 || k == 0) throw std::invalid_argument("reduced: j and k must be positive");
    const unsigned g = std::gcd(j, k);
    j /= g;
    k /= g;
    if (j == k) return {1, 1};
    return {j, k};
}

Trajectory resample_period(const Trajectory& traj, double period, std::size_t n) {
    if (traj.size() < 2) throw std::invalid_argument("resample_period: too few samples");
    // One sample of slack: a series of n samples spaced dt may stand for a
    // loop of period n*dt (sample n would repeat sample 0).
    if (!(period > 0.0) || period > traj.duration() + traj.dt_sample * 1.0000001)
        throw std::invalid_argument("resample_period: period outside trajectory span");
    Trajectory out;
    out.t0 = traj.t0;
    out.dt_sample = period / static_cast<double>(n);
    out.states.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        out.states.push_back(traj.state_at(traj.t0 + static_cast<double>(i) * out.dt_sample));
    return out;
}

unsigned detect_order(const Trajectory& one_period) {
    const Trajectory p = as_pow2_period(one_period);
    const std::size_t n = p.size();

    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += p.states[i].z;
    mean /= static_cast<double>(n);
    double rms = 0.0;
    std::vector<cdouble> z(n);
    for (std::size_t i = 0; i < n; ++i) {
        z[i] = p.states[i].z;
        const double d = p.states[i].z - mean;
        rms += d * d;
    }
    if (std::sqrt(rms / static_cast<double>(n)) < 1e-12) throw DegenerateSignalError();

    const auto norms = mode_norms(std::move(z));
    // z is real, so modes m and n-m mirror each other; the DC mode is
    // excluded (z oscillates about a nonzero mean).
    std::size_t best = 1;
    for (std::size_t m = 2; m <= n / 2; ++m)
        if (norms[m] > norms[best]) best = m;
    return static_cast<unsigned>(best);
}

ClassSignal class_signal(const Trajectory& one_period, unsigned k) {
    if (k == 0) throw std::invalid_argument("class_signal: k must be positive");
    const Trajectory p = as_pow2_period(one_period);
    const std::size_t n = p.size();

    std::vector<cdouble> w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = cdouble(p.states[i].x, p.states[i].y);
    const auto norms = mode_norms(std::move(w));

    // The spectrum of a complex signal is not symmetric; fold the *signed*
    // frequency m (m - n for the upper half) into residues mod k.
    ClassSignal cs;
    cs.values.assign(k, 0.0);
    std::vector<std::size_t> count(k, 0);
    for (std::size_t m = 0; m < n; ++m) {
        const long long signed_m =
            m <= n / 2 ? static_cast<long long>(m) : static_cast<long long>(m) - static_cast<long long>(n);
        const auto res = static_cast<std::size_t>(((signed_m % k) + k) % k);
        cs.values[res] += norms[m];
        ++count[res];
    }
    for (unsigned r = 0; r < k; ++r)
        if (count[r] > 0) cs.values[r] /= static_cast<double>(count[r]);
    return cs;
}

SymmetryType detect_type(const Trajectory& one_period) {
    const unsigned k = detect_order(one_period);
    if (k == 1) return {1, 1};

    const ClassSignal cs = class_signal(one_period, k);
    std::size_t top = 0;
    for (std::size_t r = 1; r < cs.values.size(); ++r)
        if (cs.values[r] > cs.values[top]) top = r;
    double second = 0.0;
    for (std::size_t r = 0; r < cs.values.size(); ++r)
        if (r != top) second = std::max(second, cs.values[r]);

    if (cs.values[top] - second < 0.05 * cs.values[top])
        throw AmbiguousTypeError("class signal: top two residues within 5%");
    if (top == 0)
        throw AmbiguousTypeError("class signal: argmax at residue 0 with k = " + std::to_string(k));
    return reduced(static_cast<unsigned>(top), k);
}

double verify_symmetry(const Trajectory& one_period, const SymmetryType& type) {
    const unsigned k = type.k;
    Trajectory p = one_period;
    if (p.size() % k != 0) {
        const std::size_t n = k * std::max<std::size_t>(1, kResampleLength / k);
        p = resample_period(one_period, static_cast<double>(one_period.size()) * one_period.dt_sample, n);
    }
    const std::size_t n = p.size();
    const std::size_t shift = n / k;
    const double ang = 2.0 * std::numbers::pi * static_cast<double>(type.j) / static_cast<double>(k);
    const double c = std::cos(ang), s = std::sin(ang);

    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const PhaseState& q = p.states[i];
        const PhaseState& qs = p.states[(i + shift) % n];
        const double dx = qs.x - (c * q.x - s * q.y);
        const double dy = qs.y - (s * q.x + c * q.y);
        const double dz = qs.z - q.z;
        worst = std::max(worst, std::sqrt(dx * dx + dy * dy + dz * dz));
    }
    return worst;
}

std::vector<SymmetryType> farey_sequence(unsigned n) {
    if (n == 0) throw std::invalid_argument("farey_sequence: order must be positive");
    std::vector<SymmetryType> seq;
    for (unsigned k = 1; k <= n; ++k)
        for (unsigned j = 1; j <= k; ++j)
            if (std::gcd(j, k) == 1 && (j < k || k == 1)) seq.push_back({j, k});
    std::sort(seq.begin(), seq.end());
    return seq;
}

std::vector<SymmetryType> farey_reversed(unsigned n) {
    auto seq = farey_sequence(n);
    std::reverse(seq.begin(), seq.end());
    return seq;
}

}  // namespace khorbits
