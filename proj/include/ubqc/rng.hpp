#pragma once

#include <cstdint>
#include <deque>
#include <random>

#include "ubqc/errors.hpp"

namespace ubqc {

// Deterministic randomness for one session. A single engine backs both the
// protocol's classical coins (theta~, r, permutations, trap draws) and the
// Born-rule samples, so a seed fixes the entire run bit-exactly.
//
// Measurement outcomes go through sample_outcome(), which honours a queue of
// forced outcomes; tests use this to pin teleportation byproducts and pattern
// outcomes without touching the physics.
class Rng {
  public:
    explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

    double uniform() {
        return std::uniform_real_distribution<double>(0.0, 1.0)(engine_);
    }

    // Fair protocol coin (not subject to forcing).
    int flip() { return static_cast<int>(engine_() & 1u); }

    // Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) {
        return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(engine_);
    }

    int eighths() { return static_cast<int>(below(8)); }

    // Samples a measurement outcome: 0 with probability p0. If outcomes have
    // been forced, pops the next one instead (it must be reachable).
    int sample_outcome(double p0) {
        if (!forced_.empty()) {
            int out = forced_.front();
            forced_.pop_front();
            double p = out == 0 ? p0 : 1.0 - p0;
            if (p < 1e-9)
                throw ProtocolMisuseError("forced outcome has zero probability");
            return out;
        }
        return uniform() < p0 ? 0 : 1;
    }

    void force_outcomes(std::initializer_list<int> bits) {
        for (int b : bits) forced_.push_back(b);
    }
    void force_outcome(int bit) { forced_.push_back(bit); }
    bool has_forced() const { return !forced_.empty(); }
    void clear_forced() { forced_.clear(); }

    int take_forced() {
        int out = forced_.front();
        forced_.pop_front();
        return out;
    }

  private:
    std::mt19937_64 engine_;
    std::deque<int> forced_;
};

} // namespace ubqc
