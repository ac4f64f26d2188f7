#pragma once

// Poisson structure of the Klein model. Fundamental brackets
//
//   {w, w̄} = -A (w - w̄),   {w, z̄^α} = A z̄^α,   {z^α, z̄^β} = i A δ^{αβ},
//
// with all holomorphic-holomorphic brackets zero and the rest fixed by
// antisymmetry and conj({f, h}) = {f̄, h̄}.
//
// Brackets of arbitrary fields are available through two independent routes:
// the chain rule over the fundamental table, and contraction with the
// numerically inverted Kähler metric,
//
//   {f, h} = i g^{āb} (∂_b f ∂_ā h - ∂_b h ∂_ā f).

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "kcp/generators.hpp"
#include "kcp/geometry.hpp"
#include "kcp/report.hpp"

namespace kcp {

// Coordinate label: slot 0 is w, slot α ≥ 1 is z^α; conjugate selects w̄, z̄^α.
struct CoordLabel {
    std::size_t slot = 0;
    bool conjugate = false;

    // "w", "wbar", "z1", "zbar1", ...
    static CoordLabel parse(const std::string& s);
    std::string str() const;
};

cplx fundamental_bracket(const KleinPoint& p, Coupling g, CoordLabel a, CoordLabel b);

// Table over the 2N labels ordered (u_0..u_{N-1}, v_0..v_{N-1}):
// table(i, j) = {x_i, x_j}.
CMatrix bracket_table(const KleinPoint& p, Coupling g);
// Same table continued off the real slice (w̄, z̄ read from the v slots);
// used by flows whose intermediate stages may leave the domain.
CMatrix bracket_table(const Point& x, double g);

cplx bracket_chain_rule(const Jet& f, const Jet& h, const CMatrix& table);
cplx bracket_metric(const Jet& f, const Jet& h, const CMatrix& inverse_metric);

enum class BracketPath { InverseMetric, ChainRule };

cplx bracket(const ScalarField& f, const ScalarField& h, const KleinPoint& p, Coupling g,
             BracketPath path = BracketPath::InverseMetric);

// Components of the Hamiltonian vector field {x, h} of h: hol[a] = {u_a, h},
// anti[a] = {v_a, h}. For real h, hol[a] = i g^{b̄a} ∂_b̄ h.
struct VectorField {
    std::vector<cplx> hol;
    std::vector<cplx> anti;
};

VectorField hamiltonian_vector_field(const ScalarField& h, const KleinPoint& p, Coupling g);
// Same field through the fundamental brackets, from a precomputed jet.
VectorField hamiltonian_vector_field(const Jet& h, const KleinPoint& p, Coupling g);

// ---------------------------------------------------------------------------
// Data-driven relation checks.

// Generator values at one point, memoised.
class GeneratorValues {
public:
    GeneratorValues(const Point& p, const ModelParams& params) : p_(p), params_(params) {}
    cplx operator()(const GeneratorId& id) const;
    double g() const { return params_.g; }
    const ModelParams& params() const { return params_; }

private:
    const Point& p_;
    const ModelParams& params_;
    mutable std::vector<std::pair<GeneratorId, cplx>> cache_;
};

// One bracket relation {Π left, Π right} = rhs, each side a product of
// generators.
struct Relation {
    std::string label;
    std::vector<GeneratorId> left;
    std::vector<GeneratorId> right;
    std::function<cplx(const GeneratorValues&)> rhs;
    bool gating = true;
    std::string note;
};

// Evaluates every relation at `samples` random domain points (analytic
// gradients, chain-rule path).
AlgebraReport run_relations(const std::string& suite, const std::vector<Relation>& relations,
                            std::size_t dimension, const ModelParams& params, std::size_t samples,
                            std::uint64_t seed, double tol);

// Eqs. for H, K, D and the rest of the convenient basis (conformal triple only
// when N = 1).
std::vector<Relation> su1n_relations(std::size_t dimension);
// su(1,N) relations in the h-basis (indices a, b over α and N).
std::vector<Relation> h_basis_relations(std::size_t dimension);

AlgebraReport verify_structure_constants(std::size_t dimension, double g, std::size_t samples,
                                         std::uint64_t seed, double tol,
                                         const CoefficientScales& scales = {});

// Inverse-metric bracket against the chain-rule bracket on `draws` random
// (point, generator pair) draws from all_generators and their conjugates;
// residual |Δ| / max(1, |chain|).
AlgebraReport bracket_path_check(std::size_t dimension, double g, std::size_t draws, std::uint64_t seed,
                                 double tol);

// Jacobi identity on random triples of basis generators.
AlgebraReport jacobi_check(std::size_t dimension, double g, std::size_t triples,
                           std::size_t points, std::uint64_t seed, double tol);

} // namespace kcp
