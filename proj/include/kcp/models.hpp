#pragma once

// Superintegrable models built on the Klein phase space.
//
// In action-angle variables π_α = n_α I_α, φ_α = Φ_α / n_α the angular
// Hamiltonian is 𝓘 = ½(Σ n_α I_α + g)², and the canonical Hamiltonians read
//
//   H = p_r²/2 + 𝓘/r² + V(r),   V = 0, ω²r²/2 or -γ/r.
//
// H_α, H_{αN̄}, H_{αβ̄}, M_{αβ}, R_α are single-valued in Φ only after raising
// them to the powers n_α (or n_α n_β); these are the tilde integrals.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "kcp/charts.hpp"
#include "kcp/generators.hpp"

namespace kcp {

struct AngularModel {
    std::vector<Rational> n; // one weight per angular slot (N - 1 entries)
    double g = 1.0;
    std::string label = "uniform";
    std::string note;

    std::size_t dimension() const { return n.size() + 1; }
    // Throws for g <= 0 (the standard oscillator and Coulomb systems live at
    // g = 0 and need the shifted generators) and non-positive weights.
    void validate() const;

    // n = (1, ..., 1).
    static AngularModel uniform(std::size_t dimension, double g);
};

// ½(Σ n_α I_α + g)².
double angular_hamiltonian(const AngularModel& m, const std::vector<double>& I);

// Weights scaled by the lcm of their denominators: L·n_α, all integers.
std::vector<long> integer_weights(const AngularModel& m);
long weight_lcm(const AngularModel& m);

struct TildeIntegral {
    GeneratorId base; // H_α, H_{αN̄}, H_{αβ̄}, M_{αβ} or R_α (or a shifted one-index id)

    // L·n_α for one-index bases, (L·n_α)(L·n_β) for two-index bases.
    long exponent(const AngularModel& m) const;
    std::string label(const AngularModel& m) const;
};

// Literal power of the base generator's value.
cplx tilde_eval(const TildeIntegral& t, const RadialCanonicalPoint& c, const AngularModel& m,
                const ModelParams& params);
cplx tilde_eval(const TildeIntegral& t, double r, double p_r, const std::vector<ActionAngleState>& s,
                const AngularModel& m, const ModelParams& params);

// Closed form in (r, p_r, I, Φ). With as_printed the commonly quoted
// expressions are used verbatim (M̃ prefactor and phase, R̃ exponent n_1);
// otherwise the forms that agree with the literal power.
cplx tilde_action_angle(const TildeIntegral& t, double r, double p_r, const std::vector<ActionAngleState>& s,
                        const ModelParams& params, bool as_printed = false);

// ---------------------------------------------------------------------------
// Named angular presets.

struct NamedPreset {
    enum class Kind { Monopole, SmorodinskyWinternitz, Calogero };
    Kind kind = Kind::Monopole;
    double s = 1.0;                     // monopole number
    double omega = 0.0;                 // SW frequency
    std::vector<double> g_a;            // SW couplings, one per Cartesian coordinate
    std::vector<long> degrees;          // Calogero invariant degrees
    std::vector<double> multiplicities; // Calogero coupling per positive root

    // "monopole", "sw" / "smorodinsky_winternitz", "calogero"
    static Kind parse_kind(const std::string& name);
};

AngularModel preset_angular(const NamedPreset& p);

// ---------------------------------------------------------------------------
// Systems.

enum class SystemKind { Conformal, Oscillator, Coulomb, Generic };

SystemKind parse_system_kind(const std::string& name);
std::string system_kind_name(SystemKind k);

// Angular Hamiltonian 𝓘(π, φ) with its gradient.
struct AngularFunction {
    std::function<double(const std::vector<double>& pi, const std::vector<double>& phi)> value;
    // (∂𝓘/∂π_α, ∂𝓘/∂φ_α)
    std::function<void(const std::vector<double>& pi, const std::vector<double>& phi, std::vector<double>& dpi,
                       std::vector<double>& dphi)>
        gradient;
    bool phi_dependent = true;

    // Gradient by central differences.
    static AngularFunction numeric(std::function<double(const std::vector<double>&, const std::vector<double>&)> f,
                                   bool phi_dependent = true);
    // 𝓘 given through ζ_α = H_α/√K = √π_α e^{-iφ_α}.
    static AngularFunction from_invariants(std::function<double(const std::vector<cplx>& zeta)> f);
    // ½(π + c)² with c = g, or c = 0 for the shifted systems.
    static AngularFunction standard(double c);
};

struct NamedIntegral {
    std::string label;
    std::function<cplx(const KleinPoint&, const RadialCanonicalPoint&)> value;
};

struct HamiltonianSystem {
    SystemKind kind = SystemKind::Conformal;
    AngularModel model;
    ModelParams params;
    bool shifted = false;
    // Complex-chart Hamiltonian; empty for generic angular parts.
    std::optional<GeneratorId> klein_hamiltonian;
    AngularFunction angular;
    std::function<double(double)> potential;            // V(r)
    std::function<double(double)> potential_derivative; // V'(r)
    std::vector<NamedIntegral> integrals;               // the first entry is the energy

    std::size_t dimension() const { return model.dimension(); }
    double energy(const RadialCanonicalPoint& c) const;
};

// Throws std::invalid_argument when the pieces disagree (model.g vs params.g,
// generic without an angular function) and DomainError for g <= 0.
HamiltonianSystem build_system(SystemKind kind, const AngularModel& model, const ModelParams& params,
                               std::optional<AngularFunction> generic = std::nullopt, bool shifted = false);

} // namespace kcp
