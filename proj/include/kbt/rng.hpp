#pragma once

// Seeded generator used for every randomized grid and test in the project.
// This is splitmix64 with the usual constants; any implementation that
// reproduces these three lines reproduces our grids bit for bit.

#include <cstdint>

namespace kbt {

class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, n) by rejection-free multiply-shift; n > 0.
    std::uint64_t below(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next()) * n) >> 64);
    }

    // Uniform in [lo, hi] inclusive.
    std::uint64_t range(std::uint64_t lo, std::uint64_t hi) {
        return lo + below(hi - lo + 1);
    }

    double unit() {  // [0, 1) with 53 random bits
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

  private:
    std::uint64_t state_;
};

}  // namespace kbt
