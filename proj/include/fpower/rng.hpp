// In-repo pseudo-random generator: xoshiro256++ (Blackman & Vigna, 2019),
// state initialized from a 64-bit seed through splitmix64 (Steele, Lea &
// Flood, 2014). Self-contained so simulation streams are reproducible
// bit-for-bit across platforms and languages.
//
// Stream splitting: block b of a run seeded with s draws its state from
// splitmix64 initialized at s + (b + 1) * 0x9E3779B97F4A7C15 (the 64-bit
// golden ratio), so each block's stream is a pure function of (seed, b).

#pragma once

#include <cmath>
#include <cstdint>

namespace fpower::mcsim {

class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : state_) word = splitmix64(sm);
    }

    static Rng for_block(std::uint64_t seed, std::uint64_t block_index) {
        return Rng(seed + (block_index + 1) * 0x9E3779B97F4A7C15ULL);
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

    // Uniform on (0, 1); 53-bit resolution, never exactly 0.
    double next_double() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Standard normal via the Marsaglia polar method; pairs are generated
    // and the spare is cached.
    double next_normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double x, y, s;
        do {
            x = 2.0 * next_double() - 1.0;
            y = 2.0 * next_double() - 1.0;
            s = x * x + y * y;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = y * f;
        have_spare_ = true;
        return x * f;
    }

private:
    static std::uint64_t rotl(std::uint64_t v, int k) {
        return (v << k) | (v >> (64 - k));
    }

    static std::uint64_t splitmix64(std::uint64_t& x) {
        x += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = x;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_[4];
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// N(mu, sigma) variate from the stream.
double normal_sample(Rng& rng, double mu, double sigma);

}  // namespace fpower::mcsim
