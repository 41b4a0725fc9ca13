#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace streamnet {

// Deterministic RNG used everywhere randomness is needed. std::mt19937_64 is
// seed-stable across platforms, but the std distributions are not, so the
// draws below are hand-rolled on top of raw 64-bit output.
class DetRng {
  public:
    explicit DetRng(uint64_t seed) : eng_(seed) {}

    uint64_t next_u64() { return eng_(); }

    // Uniform in [0, 1).
    double uniform01() {
        return static_cast<double>(eng_() >> 11) * (1.0 / 9007199254740992.0);
    }

    // Uniform integer in [0, n).
    uint64_t below(uint64_t n) {
        // Modulo bias is irrelevant at simulation scales (n << 2^64).
        return n ? eng_() % n : 0;
    }

    double exponential(double rate) {
        double u;
        do {
            u = uniform01();
        } while (u <= 0.0);
        return -std::log(u) / rate;
    }

  private:
    std::mt19937_64 eng_;
};

}  // namespace streamnet
