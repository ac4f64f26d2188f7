#pragma once

#include <cstdint>
#include <random>

#include "kcp/types.hpp"

namespace kcp {

// Random interior points for property checks: Im w ~ U[-3, -0.1],
// Re w ~ U[-2, 2], z uniform in the ball of radius 0.9·sqrt(-2 Im w).
class DomainSampler {
public:
    explicit DomainSampler(std::uint64_t seed) : rng_(seed) {}

    KleinPoint klein(std::size_t dimension);
    // Uniform in the ball of radius 0.95.
    PoincarePoint poincare(std::size_t dimension);

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    std::mt19937_64& engine() { return rng_; }

private:
    std::vector<cplx> ball(std::size_t count, double radius);

    std::mt19937_64 rng_;
};

} // namespace kcp
