#include "kcp/models.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace kcp {

void AngularModel::validate() const
{
    if (!(g > 0.0) || !std::isfinite(g)) {
        throw DomainError("angular model needs g > 0; g = 0 (the standard oscillator and Coulomb systems) "
                          "cannot be described by this family, use the g-shifted systems instead");
    }
    for (const auto& w : n) {
        if (w.num <= 0 || w.den <= 0) {
            throw std::invalid_argument("angular weights n must be positive");
        }
    }
}

AngularModel AngularModel::uniform(std::size_t dimension, double g)
{
    if (dimension < 1) {
        throw std::invalid_argument("dimension N must be at least 1");
    }
    AngularModel m;
    m.n.assign(dimension - 1, Rational{1, 1});
    m.g = g;
    return m;
}

double angular_hamiltonian(const AngularModel& m, const std::vector<double>& I)
{
    m.validate();
    if (I.size() != m.n.size()) {
        throw std::invalid_argument("angular_hamiltonian: expected " + std::to_string(m.n.size()) + " actions");
    }
    double s = m.g;
    for (std::size_t a = 0; a < I.size(); ++a) {
        if (!(I[a] >= 0.0)) {
            throw DomainError("action variables must be nonnegative");
        }
        s += m.n[a].value() * I[a];
    }
    return 0.5 * s * s;
}

long weight_lcm(const AngularModel& m)
{
    long L = 1;
    for (const auto& w : m.n) {
        L = std::lcm(L, w.den);
    }
    return L;
}

std::vector<long> integer_weights(const AngularModel& m)
{
    const long L = weight_lcm(m);
    std::vector<long> k;
    for (const auto& w : m.n) {
        k.push_back(w.num * (L / w.den));
    }
    return k;
}

long TildeIntegral::exponent(const AngularModel& m) const
{
    check_indices(base, m.dimension());
    const auto k = integer_weights(m);
    switch (base.arity()) {
    case 1: return k[base.alpha];
    case 2: return k[base.alpha] * k[base.beta];
    default: break;
    }
    throw std::invalid_argument("tilde integrals need an indexed base, got " + base.label());
}

std::string TildeIntegral::label(const AngularModel& m) const
{
    const long e = exponent(m);
    return e == 1 ? base.label() : "(" + base.label() + ")^" + std::to_string(e);
}

cplx tilde_eval(const TildeIntegral& t, const RadialCanonicalPoint& c, const AngularModel& m,
                const ModelParams& params)
{
    return ipow(canonical_value(t.base, c, params), static_cast<int>(t.exponent(m)));
}

namespace {

RadialCanonicalPoint embed(double r, double p_r, const std::vector<ActionAngleState>& s)
{
    RadialCanonicalPoint c;
    c.r = r;
    c.p_r = p_r;
    action_angle_embed(s, c.phi, c.pi);
    c.degenerate.assign(s.size(), false);
    c.validate();
    return c;
}

AngularModel model_of(const std::vector<ActionAngleState>& s, double g)
{
    AngularModel m;
    m.g = g;
    for (const auto& a : s) {
        m.n.push_back(a.n);
    }
    return m;
}

} // namespace

cplx tilde_eval(const TildeIntegral& t, double r, double p_r, const std::vector<ActionAngleState>& s,
                const AngularModel& m, const ModelParams& params)
{
    return tilde_eval(t, embed(r, p_r, s), m, params);
}

cplx tilde_action_angle(const TildeIntegral& t, double r, double p_r, const std::vector<ActionAngleState>& s,
                        const ModelParams& params, bool as_printed)
{
    const AngularModel m = model_of(s, params.g);
    check_indices(t.base, m.dimension());
    const long L = weight_lcm(m);
    const auto k = integer_weights(m);
    double Pi = 0.0;
    for (const auto& a : s) {
        Pi += a.n.value() * a.I;
    }
    const double c = Pi + params.g;
    const double om = params.omega, gam = params.gamma;
    const int a = t.base.alpha, b = t.base.beta;
    const auto pi = [&](int i) { return s[i].n.value() * s[i].I; };
    const auto phase = [&](double x) { return std::polar(1.0, -static_cast<double>(L) * x); };
    const auto d1 = [&](int i) { return std::pow(0.5 * pi(i), 0.5 * static_cast<double>(k[i])); };

    switch (t.base.tag) {
    case Gen::HAlpha: return d1(a) * std::pow(r, static_cast<double>(k[a])) * phase(s[a].Phi);
    case Gen::HAlphaN: return d1(a) * ipow(cplx(p_r, -c / r), static_cast<int>(k[a])) * phase(s[a].Phi);
    case Gen::HAlphaBeta: {
        const long K = k[a] * k[b];
        return std::pow(pi(a) * pi(b), 0.5 * static_cast<double>(K)) *
               phase(static_cast<double>(k[b]) * s[a].Phi - static_cast<double>(k[a]) * s[b].Phi);
    }
    case Gen::M: {
        const long K = k[a] * k[b];
        const cplx q = ipow(cplx(c / r, p_r), 2) - om * om * r * r;
        const double d = std::pow(pi(a) * pi(b), 0.5 * static_cast<double>(K));
        if (as_printed) {
            return 0.5 * d * phase(static_cast<double>(k[b]) * s[a].Phi - static_cast<double>(k[a]) * s[b].Phi) *
                   ipow(q, static_cast<int>(K));
        }
        return ipow(cplx(-0.5), static_cast<int>(K)) * d *
               phase(static_cast<double>(k[b]) * s[a].Phi + static_cast<double>(k[a]) * s[b].Phi) *
               ipow(q, static_cast<int>(K));
    }
    case Gen::R: {
        const long e = as_printed ? k[0] : k[a];
        return d1(a) * phase(s[a].Phi) * ipow(cplx(p_r, gam / c - c / r), static_cast<int>(e));
    }
    default: break;
    }
    throw std::invalid_argument("no action-angle form for " + t.base.label());
}

NamedPreset::Kind NamedPreset::parse_kind(const std::string& name)
{
    if (name == "monopole") {
        return Kind::Monopole;
    }
    if (name == "sw" || name == "smorodinsky_winternitz") {
        return Kind::SmorodinskyWinternitz;
    }
    if (name == "calogero") {
        return Kind::Calogero;
    }
    throw std::invalid_argument("unknown preset '" + name + "' (expected monopole, sw or calogero)");
}

AngularModel preset_angular(const NamedPreset& p)
{
    AngularModel m;
    switch (p.kind) {
    case NamedPreset::Kind::Monopole:
        m.n = {Rational{1, 1}, Rational{1, 1}};
        m.g = std::abs(p.s);
        m.label = "monopole";
        break;
    case NamedPreset::Kind::SmorodinskyWinternitz: {
        if (p.g_a.size() < 2) {
            throw std::invalid_argument("Smorodinsky-Winternitz preset needs at least two couplings g_a");
        }
        m.g = 0.0;
        for (double v : p.g_a) {
            m.g += std::abs(v);
        }
        m.n.assign(p.g_a.size() - 1, Rational{2, 1});
        m.label = "smorodinsky_winternitz";
        m.note = "angular frequencies k_a = 2*omega with omega = " + std::to_string(p.omega) +
                 "; weights default to n_a = 2";
        break;
    }
    case NamedPreset::Kind::Calogero: {
        if (p.degrees.empty()) {
            throw std::invalid_argument("Calogero preset needs a nonempty list of degrees");
        }
        for (long d : p.degrees) {
            if (d <= 0) {
                throw std::invalid_argument("Calogero degrees must be positive");
            }
            m.n.push_back(Rational{d, 1});
        }
        m.g = 0.0;
        for (double v : p.multiplicities) {
            if (v < 0.0) {
                throw std::invalid_argument("Calogero multiplicities must be nonnegative");
            }
            m.g += v;
        }
        m.label = "calogero";
        break;
    }
    }
    m.validate();
    return m;
}

SystemKind parse_system_kind(const std::string& name)
{
    if (name == "conformal") {
        return SystemKind::Conformal;
    }
    if (name == "oscillator") {
        return SystemKind::Oscillator;
    }
    if (name == "coulomb") {
        return SystemKind::Coulomb;
    }
    if (name == "generic") {
        return SystemKind::Generic;
    }
    throw std::invalid_argument("unknown system '" + name + "' (expected conformal, oscillator, coulomb or generic)");
}

std::string system_kind_name(SystemKind k)
{
    switch (k) {
    case SystemKind::Conformal: return "conformal";
    case SystemKind::Oscillator: return "oscillator";
    case SystemKind::Coulomb: return "coulomb";
    case SystemKind::Generic: return "generic";
    }
    return "unknown";
}

AngularFunction AngularFunction::numeric(std::function<double(const std::vector<double>&, const std::vector<double>&)> f,
                                         bool phi_dependent)
{
    AngularFunction a;
    a.value = f;
    a.phi_dependent = phi_dependent;
    a.gradient = [f](const std::vector<double>& pi, const std::vector<double>& phi, std::vector<double>& dpi,
                     std::vector<double>& dphi) {
        dpi.assign(pi.size(), 0.0);
        dphi.assign(phi.size(), 0.0);
        std::vector<double> x = pi, y = phi;
        for (std::size_t k = 0; k < pi.size(); ++k) {
            // One-sided near π = 0 keeps the stencil inside π ≥ 0.
            const double h = 1e-6 * std::max(1.0, std::abs(pi[k]));
            if (pi[k] >= h) {
                x[k] = pi[k] + h;
                const double fp = f(x, y);
                x[k] = pi[k] - h;
                dpi[k] = (fp - f(x, y)) / (2.0 * h);
            } else {
                x[k] = pi[k] + 2.0 * h;
                const double f2 = f(x, y);
                x[k] = pi[k] + h;
                const double f1 = f(x, y);
                x[k] = pi[k];
                dpi[k] = (-3.0 * f(x, y) + 4.0 * f1 - f2) / (2.0 * h);
            }
            x[k] = pi[k];
            const double hp = 1e-6;
            y[k] = phi[k] + hp;
            const double gp = f(x, y);
            y[k] = phi[k] - hp;
            dphi[k] = (gp - f(x, y)) / (2.0 * hp);
            y[k] = phi[k];
        }
    };
    return a;
}

AngularFunction AngularFunction::from_invariants(std::function<double(const std::vector<cplx>&)> f)
{
    return numeric([f](const std::vector<double>& pi, const std::vector<double>& phi) {
        std::vector<cplx> zeta;
        for (std::size_t k = 0; k < pi.size(); ++k) {
            zeta.push_back(std::polar(std::sqrt(std::max(pi[k], 0.0)), -phi[k]));
        }
        return f(zeta);
    });
}

AngularFunction AngularFunction::standard(double c)
{
    AngularFunction a;
    a.phi_dependent = false;
    a.value = [c](const std::vector<double>& pi, const std::vector<double>&) {
        const double s = std::accumulate(pi.begin(), pi.end(), c);
        return 0.5 * s * s;
    };
    a.gradient = [c](const std::vector<double>& pi, const std::vector<double>& phi, std::vector<double>& dpi,
                     std::vector<double>& dphi) {
        const double s = std::accumulate(pi.begin(), pi.end(), c);
        dpi.assign(pi.size(), s);
        dphi.assign(phi.size(), 0.0);
    };
    return a;
}

double HamiltonianSystem::energy(const RadialCanonicalPoint& c) const
{
    return 0.5 * c.p_r * c.p_r + angular.value(c.pi, c.phi) / (c.r * c.r) + potential(c.r);
}

namespace {

GeneratorId gid(Gen t, int a = -1, int b = -1) { return GeneratorId::of(t, a, b); }

NamedIntegral klein_integral(const GeneratorId& id, const ModelParams& params, long power = 1)
{
    const std::string label = power == 1 ? id.label() : "(" + id.label() + ")^" + std::to_string(power);
    return NamedIntegral{label, [id, params, power](const KleinPoint& p, const RadialCanonicalPoint&) {
                             return ipow(eval(id, p, params), static_cast<int>(power));
                         }};
}

} // namespace

HamiltonianSystem build_system(SystemKind kind, const AngularModel& model, const ModelParams& params,
                               std::optional<AngularFunction> generic, bool shifted)
{
    model.validate();
    params.validate();
    if (std::abs(model.g - params.g) > 1e-15 * std::max(1.0, model.g)) {
        throw std::invalid_argument("model coupling g = " + std::to_string(model.g) +
                                    " differs from parameter g = " + std::to_string(params.g));
    }
    if (kind == SystemKind::Generic && !generic) {
        throw std::invalid_argument("generic system needs an angular function");
    }
    if (kind == SystemKind::Generic && shifted) {
        throw std::invalid_argument("the g-shift applies to the conformal, oscillator and Coulomb systems only");
    }

    HamiltonianSystem sys;
    sys.kind = kind;
    sys.model = model;
    sys.params = params;
    sys.shifted = shifted;
    sys.angular = generic ? *generic : AngularFunction::standard(shifted ? 0.0 : model.g);
    const double om = params.omega, gam = params.gamma;
    switch (kind) {
    case SystemKind::Oscillator:
        sys.potential = [om](double r) { return 0.5 * om * om * r * r; };
        sys.potential_derivative = [om](double r) { return om * om * r; };
        break;
    case SystemKind::Coulomb:
        sys.potential = [gam](double r) { return -gam / r; };
        sys.potential_derivative = [gam](double r) { return gam / (r * r); };
        break;
    default:
        sys.potential = [](double) { return 0.0; };
        sys.potential_derivative = [](double) { return 0.0; };
        break;
    }

    const int m = static_cast<int>(model.n.size());
    const auto k = integer_weights(model);
    const auto power2 = [&](int a, int b) { return k[a] * k[b]; };

    if (kind == SystemKind::Generic) {
        auto ang = sys.angular;
        auto pot = sys.potential;
        sys.integrals.push_back(NamedIntegral{"Hgen", [ang, pot](const KleinPoint&, const RadialCanonicalPoint& c) {
                                                  return cplx(0.5 * c.p_r * c.p_r + ang.value(c.pi, c.phi) / (c.r * c.r) +
                                                              pot(c.r));
                                              }});
        if (!sys.angular.phi_dependent) {
            for (int a = 0; a < m; ++a) {
                sys.integrals.push_back(NamedIntegral{"pi_" + std::to_string(a + 1),
                                                      [a](const KleinPoint&, const RadialCanonicalPoint& c) {
                                                          return cplx(c.pi[a]);
                                                      }});
            }
        }
        return sys;
    }

    static constexpr Gen energy[2][3] = {{Gen::H, Gen::Hosc, Gen::HCoul},
                                         {Gen::ShiftedH, Gen::ShiftedHosc, Gen::ShiftedHCoul}};
    const int col = kind == SystemKind::Conformal ? 0 : kind == SystemKind::Oscillator ? 1 : 2;
    sys.klein_hamiltonian = gid(energy[shifted ? 1 : 0][col]);
    sys.integrals.push_back(klein_integral(*sys.klein_hamiltonian, params));

    for (int a = 0; a < m; ++a) {
        for (int b = a; b < m; ++b) {
            sys.integrals.push_back(klein_integral(gid(Gen::HAlphaBeta, a, b), params, power2(a, b)));
        }
    }
    switch (kind) {
    case SystemKind::Conformal:
        for (int a = 0; a < m; ++a) {
            sys.integrals.push_back(
                klein_integral(gid(shifted ? Gen::ShiftedHAlphaN : Gen::HAlphaN, a), params, k[a]));
        }
        break;
    case SystemKind::Oscillator:
        for (int a = 0; a < m; ++a) {
            for (int b = a; b < m; ++b) {
                if (!shifted) {
                    sys.integrals.push_back(klein_integral(gid(Gen::M, a, b), params, power2(a, b)));
                    continue;
                }
                const long e = power2(a, b);
                const std::string base = "calA_" + std::to_string(a + 1) + "*calB_" + std::to_string(b + 1);
                sys.integrals.push_back(NamedIntegral{
                    e == 1 ? base : "(" + base + ")^" + std::to_string(e),
                    [a, b, e, params](const KleinPoint& p, const RadialCanonicalPoint&) {
                        return ipow(eval(gid(Gen::ShiftedA, a), p, params) * eval(gid(Gen::ShiftedB, b), p, params),
                                    static_cast<int>(e));
                    }});
            }
        }
        break;
    case SystemKind::Coulomb:
        for (int a = 0; a < m; ++a) {
            sys.integrals.push_back(klein_integral(gid(shifted ? Gen::ShiftedR : Gen::R, a), params, k[a]));
        }
        break;
    default: break;
    }
    return sys;
}

} // namespace kcp
