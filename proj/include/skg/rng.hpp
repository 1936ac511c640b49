#pragma once

// Deterministic RNG used everywhere instead of std::mt19937 + distributions:
// the standard library does not pin down distribution output across
// implementations, and the harness promises byte-identical CSVs for a given
// master seed.  xoshiro256++ seeded through splitmix64, Box-Muller normals.

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>

#include "skg/common.hpp"

namespace skg {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Stable seed combiner for (master_seed, index...) -> stream seed.
inline std::uint64_t mix_seed(std::uint64_t master, std::uint64_t a) {
    std::uint64_t s = master ^ 0x6a09e667f3bcc909ULL;
    splitmix64(s);
    s ^= a + 0x9e3779b97f4a7c15ULL + (s << 6) + (s >> 2);
    return splitmix64(s);
}

inline std::uint64_t mix_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
    return mix_seed(mix_seed(master, a), b);
}

inline std::uint64_t mix_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b,
                              std::uint64_t c) {
    return mix_seed(mix_seed(master, a, b), c);
}

class Rng {
  public:
    explicit Rng(std::uint64_t seed) {
        for (auto& word : state_) {
            word = splitmix64(seed);
        }
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform in [0, 1).
    double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform phase in [0, 2*pi).
    double uniform_phase() { return uniform() * kTwoPi; }

    /// Standard normal via Box-Muller (pairs cached).
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u = uniform();
        // Guard against log(0); u = 0 has probability 2^-53 but would poison a mean.
        while (u <= 0.0) {
            u = uniform();
        }
        const double r = std::sqrt(-2.0 * std::log(u));
        const double phi = uniform_phase();
        spare_ = r * std::sin(phi);
        have_spare_ = true;
        return r * std::cos(phi);
    }

    /// Circularly-symmetric complex normal CN(0, variance).
    cx cnormal(double variance) {
        const double s = std::sqrt(variance / 2.0);
        return {s * normal(), s * normal()};
    }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::array<std::uint64_t, 4> state_{};
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace skg
