#include "kcp/charts.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "kcp/geometry.hpp"
#include "kcp/poisson.hpp"
#include "kcp/sampling.hpp"

namespace kcp {

double wrap_angle(double phi)
{
    double r = std::fmod(phi, kTwoPi);
    if (r < 0.0) {
        r += kTwoPi;
    }
    return r >= kTwoPi ? 0.0 : r;
}

double angle_difference(double a, double b)
{
    double d = std::remainder(a - b, kTwoPi);
    return d == -kTwoPi / 2 ? kTwoPi / 2 : d;
}

Rational Rational::parse(const std::string& s)
{
    Rational q;
    std::size_t pos = 0;
    try {
        const auto slash = s.find('/');
        q.num = std::stol(s.substr(0, slash), &pos);
        if (pos != (slash == std::string::npos ? s.size() : slash)) {
            throw std::invalid_argument("");
        }
        if (slash != std::string::npos) {
            const std::string d = s.substr(slash + 1);
            q.den = std::stol(d, &pos);
            if (pos != d.size()) {
                throw std::invalid_argument("");
            }
        }
    } catch (const std::exception&) {
        throw std::invalid_argument("malformed rational '" + s + "'");
    }
    if (q.num <= 0 || q.den <= 0) {
        throw std::invalid_argument("weights must be positive, got '" + s + "'");
    }
    const long c = std::gcd(q.num, q.den);
    q.num /= c;
    q.den /= c;
    return q;
}

std::string Rational::str() const
{
    return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
}

double RadialCanonicalPoint::pi_total() const { return std::accumulate(pi.begin(), pi.end(), 0.0); }

void RadialCanonicalPoint::validate() const
{
    if (!(r > 0.0) || !std::isfinite(r)) {
        throw DomainError("canonical point needs r > 0");
    }
    if (!std::isfinite(p_r)) {
        throw DomainError("canonical point has non-finite p_r");
    }
    if (phi.size() != pi.size()) {
        throw DomainError("canonical point: phi and pi differ in length");
    }
    for (std::size_t a = 0; a < pi.size(); ++a) {
        if (!(pi[a] >= 0.0) || !std::isfinite(pi[a]) || !std::isfinite(phi[a])) {
            throw DomainError("canonical point needs finite pi_" + std::to_string(a + 1) + " >= 0");
        }
    }
}

KleinPoint poincare_to_klein(const PoincarePoint& q)
{
    const cplx zN = q.z().back();
    const cplx w = kI * (zN - 1.0) / (zN + 1.0);
    const cplx f = (1.0 + kI * w) / std::sqrt(2.0);
    std::vector<cplx> z(q.z().begin(), q.z().end() - 1);
    for (auto& c : z) {
        c *= f;
    }
    return KleinPoint(w, std::move(z));
}

PoincarePoint klein_to_poincare(const KleinPoint& p)
{
    const cplx w = p.w();
    const cplx d = 1.0 + kI * w;
    std::vector<cplx> z = p.z();
    for (auto& c : z) {
        c *= std::sqrt(2.0) / d;
    }
    z.push_back((1.0 - kI * w) / d);
    return PoincarePoint(std::move(z));
}

RadialCanonicalPoint klein_to_canonical(const KleinPoint& p, Coupling g)
{
    const double A = factor_A(p, g);
    RadialCanonicalPoint c;
    c.r = std::sqrt(2.0 / A);
    c.p_r = c.r * p.w().real();
    for (const auto& z : p.z()) {
        c.pi.push_back(std::norm(z) / A);
        c.degenerate.push_back(z == cplx(0.0));
        c.phi.push_back(z == cplx(0.0) ? 0.0 : wrap_angle(std::arg(z)));
    }
    return c;
}

KleinPoint canonical_to_klein(const RadialCanonicalPoint& c, Coupling g)
{
    c.validate();
    const double r2 = c.r * c.r;
    const cplx w(c.p_r / c.r, -(c.pi_total() + g.value()) / r2);
    std::vector<cplx> z;
    for (std::size_t a = 0; a < c.pi.size(); ++a) {
        z.push_back(std::polar(std::sqrt(2.0 * c.pi[a]) / c.r, c.phi[a]));
    }
    return KleinPoint(w, std::move(z));
}

CanonicalXPoint canonical_x_chart(const RadialCanonicalPoint& c)
{
    c.validate();
    return CanonicalXPoint{c.p_r / c.r, -0.5 * c.r * c.r, c.phi, c.pi};
}

RadialCanonicalPoint canonical_x_chart_inverse(const CanonicalXPoint& c)
{
    if (!(c.p_x < 0.0)) {
        throw DomainError("x-chart point needs p_x < 0");
    }
    RadialCanonicalPoint out;
    out.r = std::sqrt(-2.0 * c.p_x);
    out.p_r = c.x * out.r;
    out.phi = c.phi;
    out.pi = c.pi;
    out.degenerate.assign(c.pi.size(), false);
    out.validate();
    return out;
}

void action_angle_embed(const std::vector<ActionAngleState>& s, std::vector<double>& phi, std::vector<double>& pi)
{
    phi.clear();
    pi.clear();
    for (const auto& a : s) {
        if (!(a.I >= 0.0)) {
            throw DomainError("action variables must be nonnegative");
        }
        if (a.n.num <= 0 || a.n.den <= 0) {
            throw std::invalid_argument("weights n must be positive");
        }
        pi.push_back(a.n.value() * a.I);
        phi.push_back(wrap_angle(a.Phi) / a.n.value());
    }
}

std::vector<ActionAngleState> action_angle_from_canonical(const std::vector<double>& phi, const std::vector<double>& pi,
                                                          const std::vector<Rational>& n)
{
    if (phi.size() != pi.size() || pi.size() != n.size()) {
        throw std::invalid_argument("action-angle conversion: size mismatch");
    }
    std::vector<ActionAngleState> out;
    for (std::size_t a = 0; a < n.size(); ++a) {
        out.push_back({pi[a] / n[a].value(), wrap_angle(phi[a] * n[a].value()), n[a]});
    }
    return out;
}

cplx canonical_value(const GeneratorId& id, const RadialCanonicalPoint& c, const ModelParams& params)
{
    check_indices(id, c.dimension());
    if (id.conjugate) {
        GeneratorId base = id;
        base.conjugate = false;
        return std::conj(canonical_value(base, c, params));
    }
    const double r = c.r, p = c.p_r, g = params.g, om = params.omega, gam = params.gamma;
    const double pi = c.pi_total();
    const double cc = pi + g;
    const auto amp = [&](int a) { return std::sqrt(0.5 * c.pi[a]) * std::polar(1.0, -c.phi[a]); };
    const double H = 0.5 * p * p + cc * cc / (2.0 * r * r);
    const double calH = 0.5 * p * p + pi * pi / (2.0 * r * r);
    const int a = id.alpha, b = id.beta;

    switch (id.tag) {
    case Gen::H: return H;
    case Gen::K: return 0.5 * r * r;
    case Gen::D: return p * r;
    case Gen::HAlpha: return r * amp(a);
    case Gen::HAlphaN: return amp(a) * cplx(p, -cc / r);
    case Gen::HAlphaBeta: return std::sqrt(c.pi[a] * c.pi[b]) * std::polar(1.0, -(c.phi[a] - c.phi[b]));
    case Gen::A: return amp(a) * cplx(p, -cc / r + om * r);
    case Gen::B: return amp(a) * cplx(p, -cc / r - om * r);
    case Gen::M: return amp(a) * cplx(p, -cc / r + om * r) * amp(b) * cplx(p, -cc / r - om * r);
    case Gen::R: return amp(a) * cplx(p, -cc / r + gam / cc);
    case Gen::Hosc: return H + 0.5 * om * om * r * r;
    case Gen::HCoul: return H - gam / r;
    case Gen::ShiftedH: return calH;
    case Gen::ShiftedHAlphaN: return amp(a) * cplx(p, -pi / r);
    case Gen::ShiftedA: return amp(a) * cplx(p, -pi / r + om * r);
    case Gen::ShiftedB: return amp(a) * cplx(p, -pi / r - om * r);
    case Gen::ShiftedR: return amp(a) * cplx(p, -pi / r + gam / pi);
    case Gen::ShiftedHosc: return calH + 0.5 * om * om * r * r;
    case Gen::ShiftedHCoul: return calH - gam / r;
    default: break;
    }
    throw std::invalid_argument("no canonical form for " + id.label());
}

namespace {

struct CanonicalJets {
    Jet r, p_r, x, p_x;
    std::vector<Jet> phi, pi;
};

CanonicalJets canonical_jets(const Point& x0, double g)
{
    const Vars<Jet> x = seed_jets(x0);
    CanonicalJets c;
    const Jet A = factor_A(x, g);
    c.r = sqrt(2.0 / A);
    c.x = 0.5 * (x.w() + x.wbar());
    c.p_r = c.r * c.x;
    c.p_x = -1.0 / A;
    for (std::size_t a = 0; a < x.angular_dim(); ++a) {
        c.pi.push_back(x.z(a) * x.zbar(a) / A);
        c.phi.push_back((log(x.z(a)) - log(x.zbar(a))) / (2.0 * kI));
    }
    return c;
}

double point_distance(const KleinPoint& a, const KleinPoint& b)
{
    double d = normalized_residual(std::abs(a.w() - b.w()), std::abs(b.w()));
    for (std::size_t k = 0; k < a.z().size(); ++k) {
        d = std::max(d, normalized_residual(std::abs(a.z(k) - b.z(k)), std::abs(b.z(k))));
    }
    return d;
}

double canonical_distance(const RadialCanonicalPoint& a, const RadialCanonicalPoint& b)
{
    double d = std::max(normalized_residual(std::abs(a.r - b.r), b.r),
                        normalized_residual(std::abs(a.p_r - b.p_r), std::abs(b.p_r)));
    for (std::size_t k = 0; k < a.pi.size(); ++k) {
        d = std::max(d, normalized_residual(std::abs(a.pi[k] - b.pi[k]), b.pi[k]));
        d = std::max(d, std::abs(angle_difference(a.phi[k], b.phi[k])));
    }
    return d;
}

double poincare_distance(const PoincarePoint& a, const PoincarePoint& b)
{
    double d = 0.0;
    for (std::size_t k = 0; k < a.z().size(); ++k) {
        d = std::max(d, std::abs(a.z()[k] - b.z()[k]));
    }
    return d;
}

} // namespace

AlgebraReport symplectomorphism_check(std::size_t dimension, double g, std::size_t samples, std::uint64_t seed,
                                      double tol, double roundtrip_tol)
{
    const Coupling cg(g);
    const std::size_t m = dimension - 1;

    AlgebraReport report;
    report.suite = "symplectomorphism";
    const auto slot = [&](const std::string& label, double t) -> RelationResult& {
        for (auto& r : report.relations) {
            if (r.label == label) {
                return r;
            }
        }
        RelationResult r;
        r.label = label;
        r.tolerance = t;
        report.relations.push_back(r);
        return report.relations.back();
    };
    const auto record = [&](const std::string& label, double t, double residual) {
        auto& r = slot(label, t);
        r.residual = std::max(r.residual, residual);
        r.samples += 1;
    };

    DomainSampler sampler(seed);
    for (std::size_t s = 0; s < samples; ++s) {
        const KleinPoint p = sampler.klein(dimension);
        const Point x = p.coords();
        const CMatrix T = bracket_table(p, cg);
        const CanonicalJets c = canonical_jets(x, g);
        const auto br = [&](const Jet& f, const Jet& h) { return bracket_chain_rule(f, h, T); };
        const auto expect = [&](const std::string& label, cplx value, double target) {
            record(label, tol, std::abs(value - target));
        };

        expect("{r,p_r}=1", br(c.r, c.p_r), 1.0);
        expect("{x,p_x}=1", br(c.x, c.p_x), 1.0);
        for (std::size_t a = 0; a < m; ++a) {
            const std::string sa = std::to_string(a + 1);
            expect("{r,phi_" + sa + "}=0", br(c.r, c.phi[a]), 0.0);
            expect("{r,pi_" + sa + "}=0", br(c.r, c.pi[a]), 0.0);
            expect("{p_r,phi_" + sa + "}=0", br(c.p_r, c.phi[a]), 0.0);
            expect("{p_r,pi_" + sa + "}=0", br(c.p_r, c.pi[a]), 0.0);
            expect("{x,phi_" + sa + "}=0", br(c.x, c.phi[a]), 0.0);
            expect("{p_x,pi_" + sa + "}=0", br(c.p_x, c.pi[a]), 0.0);
            for (std::size_t b = 0; b < m; ++b) {
                const std::string sb = std::to_string(b + 1);
                expect("{phi_" + sa + ",pi_" + sb + "}=" + (a == b ? "1" : "0"), br(c.phi[a], c.pi[b]),
                       a == b ? 1.0 : 0.0);
                if (a < b) {
                    expect("{phi_" + sa + ",phi_" + sb + "}=0", br(c.phi[a], c.phi[b]), 0.0);
                    expect("{pi_" + sa + ",pi_" + sb + "}=0", br(c.pi[a], c.pi[b]), 0.0);
                }
            }
        }

        // Chart roundtrips.
        const RadialCanonicalPoint rc = klein_to_canonical(p, cg);
        record("klein->canonical->klein", roundtrip_tol, point_distance(canonical_to_klein(rc, cg), p));
        record("canonical->x->canonical", roundtrip_tol,
               canonical_distance(canonical_x_chart_inverse(canonical_x_chart(rc)), rc));
        record("klein->poincare->klein", roundtrip_tol, point_distance(poincare_to_klein(klein_to_poincare(p)), p));
        const PoincarePoint q = sampler.poincare(dimension);
        record("poincare->klein->poincare", roundtrip_tol,
               poincare_distance(klein_to_poincare(poincare_to_klein(q)), q));
        const KleinPoint loop = canonical_to_klein(
            canonical_x_chart_inverse(canonical_x_chart(klein_to_canonical(
                poincare_to_klein(klein_to_poincare(p)), cg))),
            cg);
        record("klein->poincare->klein->canonical->x->klein", roundtrip_tol, point_distance(loop, p));
        std::vector<Rational> n;
        for (std::size_t a = 0; a < m; ++a) {
            n.push_back(Rational{static_cast<long>(a % 3) + 1, a % 2 == 0 ? 1L : 2L});
        }
        std::vector<double> phi, pi;
        action_angle_embed(action_angle_from_canonical(rc.phi, rc.pi, n), phi, pi);
        RadialCanonicalPoint back = rc;
        back.phi = phi;
        back.pi = pi;
        // Φ is reduced mod 2π, so φ comes back modulo 2π/n.
        double aa = 0.0;
        for (std::size_t a = 0; a < m; ++a) {
            const double nv = n[a].value();
            aa = std::max(aa, normalized_residual(std::abs(pi[a] - rc.pi[a]), rc.pi[a]));
            aa = std::max(aa, std::abs(std::remainder(phi[a] - rc.phi[a], kTwoPi / nv)));
        }
        record("canonical->action-angle->canonical", roundtrip_tol, aa);
    }
    for (auto& r : report.relations) {
        r.passed = r.residual < r.tolerance;
    }
    if (m == 0) {
        report.notes.push_back("N = 1: no angular pairs");
    }
    return report;
}

AlgebraReport chart_invariance_check(std::size_t dimension, const ModelParams& params, std::size_t samples,
                                     std::uint64_t seed, double tol)
{
    params.validate();
    const Coupling g(params.g);
    std::vector<GeneratorId> ids;
    for (const auto& id : all_generators(dimension)) {
        switch (id.tag) {
        case Gen::hNN:
        case Gen::hAlphaN:
        case Gen::hAlphaBeta:
        case Gen::hN:
        case Gen::hAlpha: continue;
        default: ids.push_back(id);
        }
    }
    AlgebraReport report;
    report.suite = "chart invariance";
    for (const auto& id : ids) {
        RelationResult r;
        r.label = id.label() + " klein=canonical";
        r.tolerance = tol;
        report.relations.push_back(r);
    }
    DomainSampler sampler(seed);
    for (std::size_t s = 0; s < samples; ++s) {
        const KleinPoint p = sampler.klein(dimension);
        const RadialCanonicalPoint c = klein_to_canonical(p, g);
        for (std::size_t k = 0; k < ids.size(); ++k) {
            const cplx lhs = eval(ids[k], p, params);
            const cplx rhs = canonical_value(ids[k], c, params);
            auto& r = report.relations[k];
            r.residual = std::max(r.residual, normalized_residual(std::abs(lhs - rhs), std::abs(rhs)));
            r.samples += 1;
        }
    }
    for (auto& r : report.relations) {
        r.passed = r.residual < r.tolerance;
    }
    return report;
}

} // namespace kcp
