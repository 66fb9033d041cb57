#pragma once

#include <cstdint>
#include <random>

namespace tsvar {

/// Deterministic uniform generator. Draws use the raw mt19937_64 stream with
/// a 53-bit mantissa scale, so the same seed gives the same sequence on every
/// platform and standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + uniform() * (hi - lo); }

    /// Uniform integer in [lo, hi], inclusive.
    long uniform_int(long lo, long hi) {
        const auto span = static_cast<double>(hi - lo + 1);
        long v = lo + static_cast<long>(uniform() * span);
        return v > hi ? hi : v;
    }

    std::uint64_t bits() { return gen_(); }

private:
    std::mt19937_64 gen_;
};

}  // namespace tsvar
