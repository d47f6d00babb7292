#pragma once

#include <cstdint>
#include <span>

namespace udpack {

// Fixed-algorithm generators so that seeded outputs are identical across
// platforms: splitmix64 for seeding/stream derivation, xoshiro256++ for the
// bulk stream. Uniform doubles are produced from the top 53 bits, never via
// std::uniform_real_distribution (whose output is implementation-defined).

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Derives an independent stream seed from (seed, stream index).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t s = seed ^ (0xD1B54A32D192ED03ULL * (stream + 1));
    return splitmix64_next(s);
}

class Xoshiro256pp {
  public:
    explicit Xoshiro256pp(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& w : s_) w = splitmix64_next(sm);
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1).
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) {
        // Multiply-shift rejection-free mapping is fine here; modulo bias is
        // irrelevant for n << 2^64 but we keep the unbiased widening method.
        unsigned __int128 m = static_cast<unsigned __int128>(next()) * n;
        return static_cast<std::uint64_t>(m >> 64);
    }

    /// Uniform point in the ball of radius r, by rejection from the cube.
    /// Arithmetic-only (no transcendentals), so the stream of accepted points
    /// is bit-identical across platforms.
    void in_ball(double r, std::span<double> out) {
        const double r2 = r * r;
        for (;;) {
            double n2 = 0.0;
            for (auto& c : out) {
                c = uniform(-r, r);
                n2 += c * c;
            }
            if (n2 <= r2) return;
        }
    }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::uint64_t s_[4];
};

}  // namespace udpack
