#include "kcp/sampling.hpp"

#include <cmath>

namespace kcp {

std::vector<cplx> DomainSampler::ball(std::size_t count, double radius)
{
    std::vector<cplx> z(count);
    if (count == 0) {
        return z;
    }
    std::normal_distribution<double> gauss(0.0, 1.0);
    double norm2 = 0.0;
    do {
        norm2 = 0.0;
        for (auto& c : z) {
            c = cplx(gauss(rng_), gauss(rng_));
            norm2 += std::norm(c);
        }
    } while (norm2 == 0.0);
    const double real_dim = 2.0 * static_cast<double>(count);
    const double rho = radius * std::pow(uniform(0.0, 1.0), 1.0 / real_dim);
    const double scale = rho / std::sqrt(norm2);
    for (auto& c : z) {
        c *= scale;
    }
    return z;
}

KleinPoint DomainSampler::klein(std::size_t dimension)
{
    const double y = uniform(-3.0, -0.1);
    const double x = uniform(-2.0, 2.0);
    auto z = ball(dimension - 1, 0.9 * std::sqrt(-2.0 * y));
    return KleinPoint(cplx(x, y), std::move(z));
}

PoincarePoint DomainSampler::poincare(std::size_t dimension)
{
    return PoincarePoint(ball(dimension, 0.95));
}

} // namespace kcp
