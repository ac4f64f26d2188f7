#pragma once

// Killing potentials of the su(1,N) isometries of the Klein model and the
// integrals of the conformal, oscillator-like and Coulomb-like systems built
// from them. With A = (i(w - w̄) - Σ|z|²)/g:
//
//   H = w w̄ / A,   K = 1 / A,   D = (w + w̄) / A,
//   H_α = z̄^α / A,  H_{αN̄} = z̄^α w / A,  H_{αβ̄} = z̄^α z^β / A,
//
// plus the h-basis h_{NN̄}, h_{αN̄}, h_{αβ̄}, h_N, h_α, the oscillator set
// (H_osc, A_α, B_α, M_{αβ}), the Coulomb set (H_Coul, R_α) and the g-shifted
// counterparts (𝓗, 𝓗_{αN̄}, 𝓐_α, 𝓑_α, 𝓗_osc, 𝓗_Coul, 𝓡_α).
//
// Greek indices are 0-based in code and 1-based in labels.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kcp/field.hpp"
#include "kcp/report.hpp"
#include "kcp/types.hpp"

namespace kcp {

enum class Gen {
    hNN,
    hAlphaN,
    hAlphaBeta,
    hN,
    hAlpha,
    H,
    K,
    D,
    HAlpha,
    HAlphaN,
    HAlphaBeta,
    A,
    B,
    M,
    R,
    Hosc,
    HCoul,
    ShiftedH,
    ShiftedHAlphaN,
    ShiftedA,
    ShiftedB,
    ShiftedR,
    ShiftedHosc,
    ShiftedHCoul,
};

struct GeneratorId {
    Gen tag = Gen::H;
    int alpha = -1;
    int beta = -1;
    bool conjugate = false;

    static GeneratorId of(Gen tag, int alpha = -1, int beta = -1) { return {tag, alpha, beta, false}; }
    GeneratorId conj() const
    {
        GeneratorId c = *this;
        c.conjugate = !c.conjugate;
        return c;
    }

    // Number of Greek indices the tag carries (0, 1 or 2).
    int arity() const;
    bool real_valued() const;
    // e.g. "H", "H_1N", "H_1,2", "conj(A_2)", "calR_1", "h_NN".
    std::string label() const;
    static GeneratorId parse(const std::string& label);

    friend bool operator==(const GeneratorId&, const GeneratorId&) = default;
};

// Multiplicative scale on each structural coefficient of the closed forms.
// All ones in normal use; mutation tests perturb a single entry to show the
// verification suites are sensitive to it.
enum class Coef : std::size_t {
    H,
    K,
    D,
    HAlpha,
    HAlphaN,
    HAlphaBeta,
    hNN,
    hAlphaN,
    hAlphaBeta,
    hN,
    hAlpha,
    OscFrequency,    // ω² in H_osc
    LadderFrequency, // ±iω in A_α, B_α
    CoulombCoupling, // γ in H_Coul
    CoulombLadder,   // γ term of R_α
    ShiftEnergy,     // g(g + 2ΣH_γγ̄)/(4K)
    ShiftLadder,     // i g H_α / (2K) in 𝓗_{αN̄}
    ShiftCoulomb,    // correction term of 𝓡_α
    Count,
};

std::string coefficient_name(Coef c);

struct CoefficientScales {
    std::array<double, static_cast<std::size_t>(Coef::Count)> scale;
    CoefficientScales() { scale.fill(1.0); }
    double operator[](Coef c) const { return scale[static_cast<std::size_t>(c)]; }
    double& operator[](Coef c) { return scale[static_cast<std::size_t>(c)]; }
};

struct ModelParams {
    double g = 1.0;
    double omega = 0.0; // oscillator frequency, ≥ 0
    double gamma = 0.0; // Coulomb coupling
    CoefficientScales scales;

    void validate() const;
};

// Throws std::out_of_range when an index does not fit dimension N.
void check_indices(const GeneratorId& id, std::size_t dimension);

// Closed form on the complexified chart. Defined for T = cplx and T = Jet.
template <class T>
T evaluate(const GeneratorId& id, const Vars<T>& x, const ModelParams& params);

// Value and exact Wirtinger gradient at a complexified point (conjugate ids
// handled by evaluation at the swapped-conjugated point).
cplx evaluate_value(const GeneratorId& id, const Point& p, const ModelParams& params);
Jet evaluate_jet(const GeneratorId& id, const Point& p, const ModelParams& params);

// Value at a Klein point.
cplx eval(const GeneratorId& id, const KleinPoint& p, const ModelParams& params);

ScalarField generator_field(const GeneratorId& id, const ModelParams& params);

// Every id defined for dimension N (no conjugates), in a fixed order.
std::vector<GeneratorId> all_generators(std::size_t dimension);
// H, K, D, H_α, H_{αN̄}, H_{αβ̄}.
std::vector<GeneratorId> convenient_basis(std::size_t dimension);
// h_{NN̄}, h_{αN̄}, h_{αβ̄}, h_N, h_α.
std::vector<GeneratorId> h_basis(std::size_t dimension);

struct DependencyReport {
    bool skipped = false; // some |z^α| below the division guard
    std::string note;
    double energy_residual = 0.0;  // H = H_{αN̄} H_{Nᾱ} / H_{αᾱ}, max over α
    double printed_energy_residual = 0.0; // H = Σ_α H_{αN̄} H_{Nᾱ} / (2 H_{αᾱ})
    double factorisation_residual = 0.0;  // H_{αβ̄} = H_α H_β̄ / K, max over α, β
};

inline constexpr double kDivisionGuard = 1e-10;

DependencyReport dependency_identities(const KleinPoint& p, const ModelParams& params);

// (w, z^α) -> (-1/w, z^α/w).
KleinPoint duality(const KleinPoint& p);

// Pullback identities of the duality map at random points; also reports the
// H_α sign and whether the map is an involution.
AlgebraReport duality_check(std::size_t dimension, double g, std::size_t samples,
                            std::uint64_t seed, double tol);

// killing_residual of every convenient-basis and h-basis potential at
// `samples` random points; one entry per potential.
AlgebraReport killing_check(std::size_t dimension, double g, std::size_t samples, std::uint64_t seed,
                            double tol);

AlgebraReport oscillator_algebra_check(std::size_t dimension, const ModelParams& params,
                                       std::size_t samples, std::uint64_t seed, double tol);
AlgebraReport coulomb_algebra_check(std::size_t dimension, const ModelParams& params,
                                    std::size_t samples, std::uint64_t seed, double tol);
AlgebraReport shifted_system_check(std::size_t dimension, const ModelParams& params,
                                   std::size_t samples, std::uint64_t seed, double tol);

} // namespace kcp
