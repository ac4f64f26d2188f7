#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "kcp/jet.hpp"

namespace kcp {

// A scalar field on the complexified chart, available both as plain values
// (for finite-difference oracles, which need off-shell evaluation) and as
// jets carrying exact Wirtinger gradients.
struct ScalarField {
    std::string label;
    std::function<cplx(const Point&)> value;
    std::function<Jet(const Point&)> jet;
};

// Build a field from a generic callable f(const Vars<T>&) -> T usable with
// both T = cplx and T = Jet.
template <class F>
ScalarField make_field(std::string label, F f)
{
    return ScalarField{
        std::move(label),
        [f](const Point& p) -> cplx { return f(p); },
        [f](const Point& p) -> Jet { return f(seed_jets(p)); },
    };
}

// Pointwise conjugate field f̄.
ScalarField conjugate(const ScalarField& f);

// Product of two fields.
ScalarField product(const ScalarField& a, const ScalarField& b);

// Linear combination a + c·b.
ScalarField add_scaled(const ScalarField& a, cplx c, const ScalarField& b);

// Central differences of the value along each independent slot, Richardson
// extrapolated once. Returns (∂f/∂u, ∂f/∂v). Step is relative to max(1, |x|).
std::pair<std::vector<cplx>, std::vector<cplx>> fd_gradient(const ScalarField& f, const Point& p,
                                                            double rel_step = 1e-5);

} // namespace kcp
