#pragma once

#include <cstdint>
#include <random>

namespace gfa {

/// Deterministic uniform generator. mt19937_64 has a pinned algorithm, and the
/// double conversion below avoids std::uniform_real_distribution, whose output
/// is not reproducible across standard library implementations. Reruns with
/// the same seed therefore produce byte-identical draws everywhere.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [lo, hi], both ends included.
    long uniform_int(long lo, long hi) {
        long span = hi - lo + 1;
        long v = lo + static_cast<long>(uniform() * static_cast<double>(span));
        return v > hi ? hi : v;
    }

    bool bernoulli(double p) { return uniform() < p; }

    std::uint64_t raw() { return gen_(); }

private:
    std::mt19937_64 gen_;
};

}  // namespace gfa
