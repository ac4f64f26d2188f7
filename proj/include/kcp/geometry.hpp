#pragma once

// Kähler geometry of the N-dimensional Klein model
//
//   𝒦 = -g log[i(w - w̄) - Σ z^γ z̄^γ],   A = (i(w - w̄) - Σ z^γ z̄^γ) / g.
//
// Coordinates are indexed 0 = w, α = 1..N-1 for z^α.

#include <vector>

#include <Eigen/Dense>

#include "kcp/field.hpp"
#include "kcp/types.hpp"

namespace kcp {

using CMatrix = Eigen::MatrixXcd;

// Scalar A on the complexified chart.
template <class T>
T factor_A(const Vars<T>& x, double g)
{
    T s = kI * (x.w() - x.wbar());
    for (std::size_t a = 0; a < x.angular_dim(); ++a) {
        s -= x.z(a) * x.zbar(a);
    }
    return s / g;
}

double factor_A(const KleinPoint& p, Coupling g);

template <class T>
T kahler_potential(const Vars<T>& x, double g)
{
    return -g * log(g * factor_A(x, g));
}

double kahler_potential(const KleinPoint& p, Coupling g);

struct GeometrySample {
    double A = 0.0;
    double kahler_potential = 0.0;
    CMatrix metric;         // (a, b) -> g_{a b̄}
    CMatrix inverse_metric; // (a, b) -> g^{ā b}, so inverse_metric * metric = 1
    // christoffel[c](a, b) = Γ^c_{ab} = g^{c d̄} ∂_a g_{b d̄}
    std::vector<CMatrix> christoffel;

    // max |(inverse_metric * metric - 1)_{ij}|
    double inverse_deviation() const;
};

// Closed-form metric g_{ab̄}.
CMatrix metric(const KleinPoint& p, Coupling g);

// Closed-form ∂_a g_{b d̄}; result[a](b, d).
std::vector<CMatrix> metric_derivative(const KleinPoint& p, Coupling g);

// Throws ConditioningError when A < kConditioningFloor.
GeometrySample geometry_sample(const KleinPoint& p, Coupling g);

// Smallest eigenvalue of the Hermitian metric.
double smallest_metric_eigenvalue(const KleinPoint& p, Coupling g);

// Finite-difference complex Hessian ∂_a ∂_b̄ 𝒦 (oracle for the closed form).
CMatrix fd_kahler_hessian(const KleinPoint& p, Coupling g, double rel_step = 1e-4);

struct KillingResidual {
    CMatrix residual; // ∂_a∂_b h - Γ^c_{ab} ∂_c h
    // max(1, max |∂_a∂_b h|, max |Γ^c_{ab} ∂_c h|): magnitude of the terms
    // that cancel; used to normalise the residual.
    double scale = 1.0;

    double max_abs() const { return residual.cwiseAbs().maxCoeff(); }
    double normalized() const { return max_abs() / scale; }
};

// Holomorphic Hessian by central differences of the exact gradient
// (step rel_step·max(1,|u_a|), one Richardson pass).
KillingResidual killing_residual(const KleinPoint& p, Coupling g, const ScalarField& h,
                                 double rel_step = 1e-5);

} // namespace kcp
