#pragma once

#include <cstdint>
#include <string_view>

namespace khorbits {

/// Deterministic, splittable pseudo-random generator (splitmix64 core).
/// The algorithm identifier is part of the output contract: archives record
/// it so results stay reproducible across implementations.
class Rng {
  public:
    static constexpr std::string_view kAlgorithm = "splitmix64-v1";

    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1), 53 bits of entropy.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Independent child stream; derived streams never collide with the
    /// parent sequence for distinct stream ids.
    Rng split(std::uint64_t stream) const { return Rng(mix(mix(state_, 0x6a09e667f3bcc909ULL), stream)); }

    /// Stream seed for (root seed, stream id) without constructing the parent.
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) {
        return mix(mix(seed, 0x6a09e667f3bcc909ULL), stream);
    }

  private:
    static std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
        std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
};

}  // namespace khorbits
