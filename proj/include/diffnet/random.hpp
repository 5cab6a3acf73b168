#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace diffnet {

/*
 * Seeded random source: std::mt19937_64 with uniforms built from the top
 * 53 bits and standard normals from the Box–Muller transform. Streams are
 * fixed by the seed and independent of the standard library's
 * distribution implementations.
 */
class Rng
{
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1).
    double uniform();
    /// Uniform on [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Uniform integer on [0, n).
    std::uint64_t below(std::uint64_t n);
    double normal();
    /// Fisher–Yates shuffle of 0..n−1.
    std::vector<std::size_t> permutation(std::size_t n);

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace diffnet
