#pragma once

// Hamiltonian flows on the Klein phase space.
//
// flow_complex integrates u̇_a = {u_a, H} through the fundamental brackets with
// an adaptive Dormand-Prince pair; flow_canonical integrates the separated form
// H = p_r²/2 + 𝓘/r² + V(r) with a fourth-order composition of a symmetric
// drift/kick splitting. Both record every sample in both charts.

#include <string>
#include <vector>

#include "kcp/charts.hpp"
#include "kcp/models.hpp"

namespace kcp {

enum class Scheme { AdaptiveComplex, CanonicalSplitting };

Scheme parse_scheme(const std::string& name);
std::string scheme_name(Scheme s);

struct IntegratorConfig {
    Scheme scheme = Scheme::CanonicalSplitting;
    double relTol = 1e-10;
    double absTol = 1e-12;
    double maxStep = 0.0; // 0: no cap for the adaptive scheme, 1e-3 for splitting
    double tFinal = 1.0;
    double sampleInterval = 0.0; // 0: tFinal / 1000

    void validate() const;
    double sample_interval() const;
    // Fixed step of the splitting scheme: min(maxStep, relTol^{1/4}/3).
    double splitting_step() const;
};

enum class TrajectoryStatus { Completed, DomainExit };

struct TrajectorySample {
    double t;
    KleinPoint klein;
    RadialCanonicalPoint canonical;
};

struct Trajectory {
    std::string chart; // "klein" or "canonical"
    std::vector<TrajectorySample> samples;
    TrajectoryStatus status = TrajectoryStatus::Completed;
    std::string message;

    bool completed() const { return status == TrajectoryStatus::Completed; }
    const TrajectorySample& back() const { return samples.back(); }
};

// Flow of any real-valued generator in the complex chart.
Trajectory flow_complex(const GeneratorId& hamiltonian, const KleinPoint& p0, const ModelParams& params,
                        const IntegratorConfig& cfg);
// Throws std::invalid_argument for systems without a complex-chart Hamiltonian.
Trajectory flow_complex(const HamiltonianSystem& sys, const KleinPoint& p0, const IntegratorConfig& cfg);

Trajectory flow_canonical(const HamiltonianSystem& sys, const RadialCanonicalPoint& c0, const IntegratorConfig& cfg);

// Dispatch on cfg.scheme from a canonical initial state.
Trajectory simulate(const HamiltonianSystem& sys, const RadialCanonicalPoint& c0, const IntegratorConfig& cfg);

struct IntegralDrift {
    std::string label;
    double initial_abs = 0.0;
    double max_relative = 0.0; // max |F(t) - F(0)| / max(1, |F(0)|)
    double max_absolute = 0.0;
    std::vector<double> series; // relative drift per sample
};

struct InvariantAudit {
    std::vector<IntegralDrift> entries;

    double max_relative() const;
    const IntegralDrift* find(const std::string& label) const;
};

// Throws std::invalid_argument for an empty trajectory.
InvariantAudit audit(const Trajectory& traj, const std::vector<NamedIntegral>& integrals);

// Closed-form reductions used as oracles.
namespace oracle {

// K(t) = K0 + D0 t + H t² along the H-flow.
double conformal_K(double t, double K0, double D0, double H);

// r(t)² for H = p²/2 + 𝓘/r² + ω²r²/2; u = r² obeys u'' = 4E - 4ω²u.
double oscillator_r2(double t, double r0, double p0, double energy, double omega);

// Radial period π/ω of the oscillator.
double oscillator_radial_period(double omega);

// K-flow in the canonical chart: r fixed, p_r(t) = p_r(0) - r t.
double k_flow_momentum(double t, double r0, double p0);

} // namespace oracle

} // namespace kcp
