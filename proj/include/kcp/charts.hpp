#pragma once

// Charts of the Klein model and the maps between them:
//
//   Poincaré ball (z^1..z^N)      w = i(z^N - 1)/(z^N + 1),  z̃^α = z^α (1 + i w)/√2
//   canonical (r, p_r, φ, π)      w = p_r/r - i(π + g)/r²,   z^α = √(2π_α)/r e^{iφ_α}
//   canonical (x, p_x, φ, π)      (x, p_x) = (p_r/r, -r²/2)
//   action-angle (I, Φ; n)        π_α = n_α I_α,  φ_α = Φ_α / n_α
//
// with π = Σ π_α and A = 2/r² on the canonical chart.

#include <cstdint>
#include <string>
#include <vector>

#include "kcp/generators.hpp"
#include "kcp/report.hpp"
#include "kcp/types.hpp"

namespace kcp {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// Angle reduced to [0, 2π).
double wrap_angle(double phi);
// Signed distance between two angles on the circle, in (-π, π].
double angle_difference(double a, double b);

struct Rational {
    long num = 1;
    long den = 1;

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    // "3", "3/2"
    static Rational parse(const std::string& s);
    std::string str() const;

    bool operator==(const Rational&) const = default;
};

struct CanonicalXPoint {
    double x = 0.0;
    double p_x = -0.5; // < 0
    std::vector<double> phi;
    std::vector<double> pi;
};

struct RadialCanonicalPoint {
    double r = 1.0; // > 0
    double p_r = 0.0;
    std::vector<double> phi; // [0, 2π)
    std::vector<double> pi;  // ≥ 0
    // φ_α is conventional (set to 0) where z^α = 0.
    std::vector<bool> degenerate;

    std::size_t dimension() const { return pi.size() + 1; }
    double pi_total() const;
    // Throws DomainError unless r > 0, π_α ≥ 0 and the vectors agree in size.
    void validate() const;
};

struct ActionAngleState {
    double I = 0.0;   // ≥ 0
    double Phi = 0.0; // [0, 2π)
    Rational n;       // > 0
};

KleinPoint poincare_to_klein(const PoincarePoint& q);
PoincarePoint klein_to_poincare(const KleinPoint& p);

RadialCanonicalPoint klein_to_canonical(const KleinPoint& p, Coupling g);
KleinPoint canonical_to_klein(const RadialCanonicalPoint& c, Coupling g);

CanonicalXPoint canonical_x_chart(const RadialCanonicalPoint& c);
RadialCanonicalPoint canonical_x_chart_inverse(const CanonicalXPoint& c);

// Angular part (φ_α, π_α) of the canonical chart from action-angle data. The
// image phase lies in [0, 2π/n_α) before wrapping.
void action_angle_embed(const std::vector<ActionAngleState>& s, std::vector<double>& phi,
                        std::vector<double>& pi);
std::vector<ActionAngleState> action_angle_from_canonical(const std::vector<double>& phi,
                                                          const std::vector<double>& pi,
                                                          const std::vector<Rational>& n);

// Generator value written in the canonical chart (H, K, D, H_α, H_{αN̄},
// H_{αβ̄}, the oscillator and Coulomb sets, and the shifted ones).
cplx canonical_value(const GeneratorId& id, const RadialCanonicalPoint& c, const ModelParams& params);

// Pushes r, p_r, φ_α, π_α (and x, p_x) through the fundamental Klein
// brackets at sampled points: {r,p_r}=1, {φ_α,π_β}=δ, {x,p_x}=1, all other
// pairs 0. Also reports the roundtrip errors of every chart map.
AlgebraReport symplectomorphism_check(std::size_t dimension, double g, std::size_t samples,
                                      std::uint64_t seed, double tol, double roundtrip_tol = 1e-12);

// eval(id, p) against canonical_value(id, klein_to_canonical(p)).
AlgebraReport chart_invariance_check(std::size_t dimension, const ModelParams& params,
                                     std::size_t samples, std::uint64_t seed, double tol);

} // namespace kcp
