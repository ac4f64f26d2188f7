#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "kcp/jet.hpp"

namespace kcp {

// Input outside the open Klein domain (or another chart's domain).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Metric too close to singular to invert reliably (A below the floor).
class ConditioningError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A below this is treated as the domain boundary.
inline constexpr double kConditioningFloor = 1e-8;

// Positive coupling g of the Kähler potential.
class Coupling {
public:
    explicit Coupling(double g) : g_(g)
    {
        if (!(g > 0.0) || !std::isfinite(g)) {
            throw DomainError("coupling g must be a finite positive number, got " + std::to_string(g));
        }
    }
    double value() const { return g_; }
    operator double() const { return g_; }

private:
    double g_;
};

// Point (w, z^1..z^{N-1}) of the N-dimensional Klein model:
// Im w < 0 and Σ|z^α|² < -2 Im w.
class KleinPoint {
public:
    KleinPoint(cplx w, std::vector<cplx> z);

    // Checks the invariants without throwing.
    static bool in_domain(cplx w, const std::vector<cplx>& z);

    cplx w() const { return w_; }
    const std::vector<cplx>& z() const { return z_; }
    cplx z(std::size_t alpha) const { return z_.at(alpha); }
    std::size_t dimension() const { return z_.size() + 1; }
    double z_norm2() const;

    // On-shell complexified point (v = conj u).
    Point coords() const;

private:
    cplx w_;
    std::vector<cplx> z_;
};

// Point of the Poincaré ball chart: Σ|z^a|² < 1. The last entry is z^N.
class PoincarePoint {
public:
    explicit PoincarePoint(std::vector<cplx> z);
    const std::vector<cplx>& z() const { return z_; }
    std::size_t dimension() const { return z_.size(); }

private:
    std::vector<cplx> z_;
};

} // namespace kcp
