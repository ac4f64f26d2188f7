#include <cmath>

#include <Eigen/Eigenvalues>

#include "kcp/dynamics.hpp"
#include "kcp/geometry.hpp"
#include "kcp/sampling.hpp"
#include "support.hpp"

using namespace kcp;

namespace {

RadialCanonicalPoint random_canonical(DomainSampler& s, std::size_t n)
{
    RadialCanonicalPoint c;
    c.r = s.uniform(0.5, 2.0);
    c.p_r = s.uniform(-1.0, 1.0);
    for (std::size_t a = 0; a + 1 < n; ++a) {
        c.phi.push_back(s.uniform(0.0, kTwoPi));
        c.pi.push_back(s.uniform(0.2, 1.0));
    }
    return c;
}

// Canonical coordinates as one vector: (r, φ_1..) and (p_r, π_1..).
struct Flat {
    std::vector<double> q, p;
};

Flat flatten(const RadialCanonicalPoint& c)
{
    Flat f;
    f.q.push_back(c.r);
    f.p.push_back(c.p_r);
    f.q.insert(f.q.end(), c.phi.begin(), c.phi.end());
    f.p.insert(f.p.end(), c.pi.begin(), c.pi.end());
    return f;
}

RadialCanonicalPoint unflatten(const Flat& f)
{
    RadialCanonicalPoint c;
    c.r = f.q[0];
    c.p_r = f.p[0];
    c.phi.assign(f.q.begin() + 1, f.q.end());
    c.pi.assign(f.p.begin() + 1, f.p.end());
    return c;
}

using CanonicalFn = std::function<cplx(const RadialCanonicalPoint&)>;

// Fourth-order central difference of f along one coordinate.
cplx partial(const CanonicalFn& f, const Flat& x, bool momentum, std::size_t i)
{
    const double h = 2e-4;
    const auto at = [&](double d) {
        Flat y = x;
        (momentum ? y.p : y.q)[i] += d;
        return f(unflatten(y));
    };
    return (8.0 * (at(h) - at(-h)) - (at(2.0 * h) - at(-2.0 * h))) / (12.0 * h);
}

// |{f, g}| relative to the product of the gradient norms.
double relative_bracket(const CanonicalFn& f, const CanonicalFn& g, const RadialCanonicalPoint& c)
{
    const Flat x = flatten(c);
    cplx s = 0.0;
    double nf = 0.0, ng = 0.0;
    for (std::size_t i = 0; i < x.q.size(); ++i) {
        const cplx fq = partial(f, x, false, i), fp = partial(f, x, true, i);
        const cplx gq = partial(g, x, false, i), gp = partial(g, x, true, i);
        s += fq * gp - fp * gq;
        nf += std::norm(fq) + std::norm(fp);
        ng += std::norm(gq) + std::norm(gp);
    }
    return std::abs(s) / std::max(std::sqrt(nf * ng), 1e-300);
}

} // namespace

TEST_SUITE("properties")
{
    TEST_CASE("A > 0 and the metric is positive definite on the domain")
    {
        DomainSampler s(101);
        for (int k = 0; k < 1000; ++k) {
            const std::size_t n = 1 + static_cast<std::size_t>(k % 4);
            const KleinPoint p = s.klein(n);
            const Coupling g(s.uniform(0.3, 3.0));
            CHECK(factor_A(p, g) > 0.0);
            const CMatrix G = metric(p, g);
            CHECK((G - G.adjoint()).cwiseAbs().maxCoeff() <= 1e-12 * G.cwiseAbs().maxCoeff());
            const Eigen::SelfAdjointEigenSolver<CMatrix> es(G);
            CHECK(es.eigenvalues().minCoeff() > 0.0);
        }
    }

    TEST_CASE("every basis potential is Killing for several couplings")
    {
        for (double g : {0.5, 1.0, 2.0}) {
            for (std::size_t n : {1u, 3u}) {
                const auto r = killing_check(n, g, 20, 41, 1e-6);
                CHECK(r.passed());
            }
        }
    }

    TEST_CASE("every integral of every system commutes with its Hamiltonian")
    {
        DomainSampler s(202);
        ModelParams params;
        params.g = 0.9;
        params.omega = 1.1;
        params.gamma = 0.8;
        AngularModel m;
        m.g = params.g;
        m.n = {Rational{1, 1}, Rational{2, 1}};
        for (SystemKind kind : {SystemKind::Conformal, SystemKind::Oscillator, SystemKind::Coulomb}) {
            for (bool shifted : {false, true}) {
                const auto sys = build_system(kind, m, params, std::nullopt, shifted);
                const CanonicalFn H = [&](const RadialCanonicalPoint& c) { return cplx(sys.energy(c)); };
                for (int k = 0; k < 5; ++k) {
                    const auto c0 = random_canonical(s, 3);
                    for (const auto& integral : sys.integrals) {
                        const CanonicalFn F = [&](const RadialCanonicalPoint& c) {
                            return integral.value(canonical_to_klein(c, Coupling(params.g)), c);
                        };
                        CHECK_MESSAGE(relative_bracket(F, H, c0) < 1e-9, 
                                      (system_kind_name(kind) + (shifted ? " shifted " : " ") + integral.label));
                    }
                }
            }
        }
    }

    TEST_CASE("the system Hamiltonian matches its complex-chart generator")
    {
        DomainSampler s(303);
        ModelParams params;
        params.g = 1.2;
        params.omega = 0.7;
        params.gamma = 1.5;
        for (SystemKind kind : {SystemKind::Conformal, SystemKind::Oscillator, SystemKind::Coulomb}) {
            for (bool shifted : {false, true}) {
                const auto sys = build_system(kind, AngularModel::uniform(3, params.g), params, std::nullopt, shifted);
                for (int k = 0; k < 20; ++k) {
                    const auto c = random_canonical(s, 3);
                    const KleinPoint p = canonical_to_klein(c, Coupling(params.g));
                    CHECK(eval(*sys.klein_hamiltonian, p, params).real() ==
                          doctest::Approx(sys.energy(c)).epsilon(1e-11));
                }
            }
        }
    }

    TEST_CASE("tilde integrals with n = 2 are conserved")
    {
        ModelParams params;
        params.omega = 1.0;
        params.gamma = 1.0;
        AngularModel m;
        m.n = {Rational{2, 1}};
        for (SystemKind kind : {SystemKind::Oscillator, SystemKind::Coulomb}) {
            const auto sys = build_system(kind, m, params);
            RadialCanonicalPoint c0;
            c0.r = 1.0;
            c0.p_r = 0.2;
            c0.phi = {0.3};
            c0.pi = {0.5};
            IntegratorConfig cfg;
            cfg.tFinal = 20.0;
            const auto traj = simulate(sys, c0, cfg);
            REQUIRE(traj.completed());
            CHECK(audit(traj, sys.integrals).max_relative() < 1e-6);
        }
    }

    TEST_CASE("composed chart loops close")
    {
        DomainSampler s(404);
        const Coupling g(1.1);
        for (int k = 0; k < 200; ++k) {
            const KleinPoint p = s.klein(3);
            const KleinPoint a = poincare_to_klein(klein_to_poincare(p));
            const auto x = canonical_x_chart(klein_to_canonical(a, g));
            const KleinPoint b = canonical_to_klein(canonical_x_chart_inverse(x), g);
            CHECK(std::abs(b.w() - p.w()) <= 1e-12 * std::max(1.0, std::abs(p.w())));
            for (std::size_t i = 0; i < 2; ++i) {
                CHECK(std::abs(b.z(i) - p.z(i)) <= 1e-12 * std::max(1.0, std::abs(p.z(i))));
            }
        }
    }

    TEST_CASE("sampling is deterministic per seed")
    {
        DomainSampler a(9), b(9);
        for (int k = 0; k < 10; ++k) {
            const KleinPoint p = a.klein(3), q = b.klein(3);
            CHECK(p.w() == q.w());
            CHECK(p.z(1) == q.z(1));
        }
    }
}
