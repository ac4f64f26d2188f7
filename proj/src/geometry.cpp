#include "kcp/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace kcp {

namespace {

// L = gA = i(w - w̄) - Σ|z|², with ℓ_a = ∂_a L, ℓ̄_a = ∂_ā L and the constant
// mixed second derivative c_{ab} = ∂_a∂_b̄ L = -δ_{ab} on the z block.
struct Potential {
    double L;
    std::vector<cplx> ell;
    std::vector<cplx> ellbar;
    std::vector<double> c;
};

Potential potential_data(const KleinPoint& p, double g)
{
    const std::size_t n = p.dimension();
    Potential d;
    d.L = g * factor_A(p, Coupling(g));
    d.ell.resize(n);
    d.ellbar.resize(n);
    d.c.assign(n, -1.0);
    d.ell[0] = kI;
    d.ellbar[0] = -kI;
    d.c[0] = 0.0;
    for (std::size_t a = 1; a < n; ++a) {
        d.ell[a] = -std::conj(p.z(a - 1));
        d.ellbar[a] = -p.z(a - 1);
    }
    return d;
}

} // namespace

double factor_A(const KleinPoint& p, Coupling g)
{
    return (-2.0 * p.w().imag() - p.z_norm2()) / g.value();
}

double kahler_potential(const KleinPoint& p, Coupling g)
{
    return -g.value() * std::log(g.value() * factor_A(p, g));
}

CMatrix metric(const KleinPoint& p, Coupling g)
{
    const auto d = potential_data(p, g);
    const std::size_t n = p.dimension();
    CMatrix G(n, n);
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            const double cab = a == b ? d.c[a] : 0.0;
            G(a, b) = -g.value() * (cab / d.L - d.ell[a] * d.ellbar[b] / (d.L * d.L));
        }
    }
    return G;
}

std::vector<CMatrix> metric_derivative(const KleinPoint& p, Coupling g)
{
    const auto d = potential_data(p, g);
    const std::size_t n = p.dimension();
    const double L2 = d.L * d.L;
    const double L3 = L2 * d.L;
    std::vector<CMatrix> dG(n, CMatrix::Zero(n, n));
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            for (std::size_t e = 0; e < n; ++e) {
                const double cbe = b == e ? d.c[b] : 0.0;
                const double cae = a == e ? d.c[a] : 0.0;
                dG[a](b, e) = g.value() * ((cbe * d.ell[a] + d.ell[b] * cae) / L2 -
                                           2.0 * d.ell[a] * d.ell[b] * d.ellbar[e] / L3);
            }
        }
    }
    return dG;
}

double GeometrySample::inverse_deviation() const
{
    const auto n = metric.rows();
    return (inverse_metric * metric - CMatrix::Identity(n, n)).cwiseAbs().maxCoeff();
}

GeometrySample geometry_sample(const KleinPoint& p, Coupling g)
{
    GeometrySample s;
    s.A = factor_A(p, g);
    if (s.A < kConditioningFloor) {
        std::ostringstream os;
        os << "point too close to the domain boundary: A = " << s.A << " < " << kConditioningFloor;
        throw ConditioningError(os.str());
    }
    s.kahler_potential = kahler_potential(p, g);
    s.metric = metric(p, g);
    // Hermitian positive definite on the domain.
    s.inverse_metric = s.metric.llt().solve(CMatrix::Identity(s.metric.rows(), s.metric.cols()));

    const std::size_t n = p.dimension();
    const auto dG = metric_derivative(p, g);
    s.christoffel.assign(n, CMatrix::Zero(n, n));
    // Γ^c_{ab} = Σ_e g^{c ē} ∂_a g_{b ē}, with g^{c ē} = inverse_metric(e, c).
    for (std::size_t c = 0; c < n; ++c) {
        for (std::size_t a = 0; a < n; ++a) {
            for (std::size_t b = 0; b < n; ++b) {
                cplx acc = 0.0;
                for (std::size_t e = 0; e < n; ++e) {
                    acc += s.inverse_metric(e, c) * dG[a](b, e);
                }
                s.christoffel[c](a, b) = acc;
            }
        }
    }
    return s;
}

double smallest_metric_eigenvalue(const KleinPoint& p, Coupling g)
{
    Eigen::SelfAdjointEigenSolver<CMatrix> es(metric(p, g), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

CMatrix fd_kahler_hessian(const KleinPoint& p, Coupling g, double rel_step)
{
    const double gv = g.value();
    const auto f = [gv](const Point& x) { return kahler_potential(x, gv); };
    const Point x0 = p.coords();
    const std::size_t n = p.dimension();
    CMatrix H(n, n);
    const auto mixed = [&](std::size_t a, std::size_t b, double h) {
        cplx acc = 0.0;
        for (int sa : {1, -1}) {
            for (int sb : {1, -1}) {
                Point x = x0;
                x.u[a] += static_cast<double>(sa) * h;
                x.v[b] += static_cast<double>(sb) * h;
                acc += static_cast<double>(sa * sb) * f(x);
            }
        }
        return acc / (4.0 * h * h);
    };
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            const double h = rel_step * std::max({1.0, std::abs(x0.u[a]), std::abs(x0.v[b])});
            H(a, b) = (4.0 * mixed(a, b, 0.5 * h) - mixed(a, b, h)) / 3.0;
        }
    }
    return H;
}

KillingResidual killing_residual(const KleinPoint& p, Coupling g, const ScalarField& h,
                                 double rel_step)
{
    const auto geo = geometry_sample(p, g);
    const Point x0 = p.coords();
    const std::size_t n = p.dimension();
    const Jet j0 = h.jet(x0);

    const auto column = [&](std::size_t a, double step) {
        Point xp = x0, xm = x0;
        xp.u[a] += step;
        xm.u[a] -= step;
        const Jet jp = h.jet(xp);
        const Jet jm = h.jet(xm);
        std::vector<cplx> col(n);
        for (std::size_t b = 0; b < n; ++b) {
            col[b] = (jp.du(b) - jm.du(b)) / (2.0 * step);
        }
        return col;
    };

    CMatrix hess(n, n);
    for (std::size_t a = 0; a < n; ++a) {
        const double step = rel_step * std::max(1.0, std::abs(x0.u[a]));
        const auto c1 = column(a, step);
        const auto c2 = column(a, 0.5 * step);
        for (std::size_t b = 0; b < n; ++b) {
            hess(a, b) = (4.0 * c2[b] - c1[b]) / 3.0;
        }
    }

    KillingResidual out;
    out.residual = CMatrix(n, n);
    double term_max = 0.0;
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            cplx conn = 0.0;
            for (std::size_t c = 0; c < n; ++c) {
                conn += geo.christoffel[c](a, b) * j0.du(c);
            }
            out.residual(a, b) = hess(a, b) - conn;
            term_max = std::max({term_max, std::abs(hess(a, b)), std::abs(conn)});
        }
    }
    out.scale = std::max(1.0, term_max);
    return out;
}

} // namespace kcp
