#pragma once

#include "jetlift/localfunction.hpp"

#include <cstdint>

namespace jetlift {

// SplitMix64. Deliberately not std::mt19937 + distributions: the std
// distribution algorithms are implementation-defined and the CLI promises
// byte-identical output for a given seed on any build.
class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Inclusive range.
    int uniform(int lo, int hi) {
        if (hi <= lo) return lo;
        return lo + static_cast<int>(next() % static_cast<uint64_t>(hi - lo + 1));
    }

    bool chance(int num, int den) { return uniform(1, den) <= num; }

    // Nonzero numerator in [-bound, bound], denominator in [1, maxden].
    Rat rational(int bound, int maxden = 3) {
        int num = uniform(1, bound) * (chance(1, 2) ? 1 : -1);
        Rat q(num, uniform(1, maxden));
        q.canonicalize();
        return q;
    }

private:
    uint64_t state_;
};

struct LfGenParams {
    int max_terms = 4;
    int max_x_degree = 2;
    int max_jet_order = 3;
    int max_u_factors = 2;
    int coeff_bound = 5;
};

LocalFunction random_lf(Rng& rng, int dim, const LfGenParams& p = {});

} // namespace jetlift
