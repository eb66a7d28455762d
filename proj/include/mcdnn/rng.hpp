#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>

#include "mcdnn/error.hpp"

namespace mcdnn {

/// Deterministic pseudo-random generator: xoshiro256** (Blackman & Vigna),
/// state seeded with consecutive splitmix64 outputs. Pure 64-bit integer
/// arithmetic, so the same seed yields the same sequence on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next_u64();

    /// Uniform double in [lo, hi). Consumes exactly one generator step.
    double uniform(double lo, double hi);

    /// Uniform double in [0, 1). Consumes exactly one generator step.
    double unit();

    /// Uniform integer in [0, n). n must be positive.
    std::uint64_t below(std::uint64_t n);

    /// Independent deterministic stream: same (seed, stream) always gives the
    /// same generator, regardless of any other draws.
    static Rng derive(std::uint64_t seed, std::uint64_t stream);

    /// Order-insensitive-free hash of several words into one seed. Used to
    /// derive per-(epoch, image) streams that are stable under parallelism.
    static std::uint64_t hash_words(std::initializer_list<std::uint64_t> words);

private:
    std::array<std::uint64_t, 4> state_;
};

} // namespace mcdnn
