#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>

namespace shaderevo {

/// Seeded random stream. The engine is std::mt19937_64; the distributions are
/// spelled out here so sequences are identical across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed);
    /// Independent stream derived from (seed, stream) via seed_seq.
    Rng(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1).
    double uniform();
    double uniform(double lo, double hi);
    /// Uniform in [0, n); n must be positive.
    std::size_t index(std::size_t n);
    bool bernoulli(double p);
    /// Standard normal via Box-Muller (no cached second value).
    double normal();
    /// Index drawn proportionally to non-negative weights; returns size() when all are zero.
    std::size_t weighted(std::span<const double> weights);

private:
    std::mt19937_64 engine_;
};

}  // namespace shaderevo
