#include "kcp/generators.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "kcp/geometry.hpp"
#include "kcp/poisson.hpp"
#include "kcp/sampling.hpp"

namespace kcp {

namespace {

struct TagInfo {
    Gen tag;
    const char* stem;
    int arity;
    bool real;
};

// Label stems; one-index tags print as stem + α (+ suffix), two-index tags as
// stem + α,β.
constexpr TagInfo kTags[] = {
    {Gen::hNN, "h_NN", 0, true},
    {Gen::hAlphaN, "h_", 1, false},
    {Gen::hAlphaBeta, "h_", 2, false},
    {Gen::hN, "h_N", 0, false},
    {Gen::hAlpha, "h_", 1, false},
    {Gen::H, "H", 0, true},
    {Gen::K, "K", 0, true},
    {Gen::D, "D", 0, true},
    {Gen::HAlpha, "H_", 1, false},
    {Gen::HAlphaN, "H_", 1, false},
    {Gen::HAlphaBeta, "H_", 2, false},
    {Gen::A, "A_", 1, false},
    {Gen::B, "B_", 1, false},
    {Gen::M, "M_", 2, false},
    {Gen::R, "R_", 1, false},
    {Gen::Hosc, "Hosc", 0, true},
    {Gen::HCoul, "HCoul", 0, true},
    {Gen::ShiftedH, "calH", 0, true},
    {Gen::ShiftedHAlphaN, "calH_", 1, false},
    {Gen::ShiftedA, "calA_", 1, false},
    {Gen::ShiftedB, "calB_", 1, false},
    {Gen::ShiftedR, "calR_", 1, false},
    {Gen::ShiftedHosc, "calHosc", 0, true},
    {Gen::ShiftedHCoul, "calHCoul", 0, true},
};

const TagInfo& info(Gen tag)
{
    for (const auto& t : kTags) {
        if (t.tag == tag) {
            return t;
        }
    }
    throw std::logic_error("unknown generator tag");
}

bool has_n_suffix(Gen tag)
{
    return tag == Gen::hAlphaN || tag == Gen::HAlphaN || tag == Gen::ShiftedHAlphaN;
}

} // namespace

int GeneratorId::arity() const { return info(tag).arity; }

bool GeneratorId::real_valued() const
{
    if (info(tag).real) {
        return true;
    }
    return (tag == Gen::HAlphaBeta || tag == Gen::hAlphaBeta) && alpha == beta;
}

std::string GeneratorId::label() const
{
    const auto& t = info(tag);
    std::string s = t.stem;
    if (t.arity >= 1) {
        s += std::to_string(alpha + 1);
    }
    if (t.arity == 2) {
        s += "," + std::to_string(beta + 1);
    }
    if (has_n_suffix(tag)) {
        s += "N";
    }
    return conjugate ? "conj(" + s + ")" : s;
}

GeneratorId GeneratorId::parse(const std::string& label)
{
    if (label.rfind("conj(", 0) == 0 && label.size() > 6 && label.back() == ')') {
        return parse(label.substr(5, label.size() - 6)).conj();
    }
    // Exact match against every label shape; indices are small so a direct
    // scan is enough.
    for (const auto& t : kTags) {
        const std::string stem = t.stem;
        if (t.arity == 0) {
            if (label == stem) {
                return of(t.tag);
            }
            continue;
        }
        if (label.rfind(stem, 0) != 0) {
            continue;
        }
        std::string rest = label.substr(stem.size());
        const bool n_suffix = has_n_suffix(t.tag);
        if (n_suffix != (!rest.empty() && rest.back() == 'N')) {
            continue;
        }
        if (n_suffix) {
            rest.pop_back();
        }
        const auto comma = rest.find(',');
        if ((t.arity == 2) != (comma != std::string::npos)) {
            continue;
        }
        const auto number = [](const std::string& s) -> int {
            if (s.empty() || s.size() > 6 || s.find_first_not_of("0123456789") != std::string::npos) {
                return -1;
            }
            return std::stoi(s) - 1;
        };
        const int a = number(t.arity == 2 ? rest.substr(0, comma) : rest);
        const int b = t.arity == 2 ? number(rest.substr(comma + 1)) : 0;
        if (a < 0 || b < 0) {
            continue;
        }
        return of(t.tag, a, t.arity == 2 ? b : -1);
    }
    throw std::invalid_argument("unknown generator label '" + label + "'");
}

std::string coefficient_name(Coef c)
{
    switch (c) {
    case Coef::H: return "H";
    case Coef::K: return "K";
    case Coef::D: return "D";
    case Coef::HAlpha: return "H_a";
    case Coef::HAlphaN: return "H_aN";
    case Coef::HAlphaBeta: return "H_ab";
    case Coef::hNN: return "h_NN";
    case Coef::hAlphaN: return "h_aN";
    case Coef::hAlphaBeta: return "h_ab";
    case Coef::hN: return "h_N";
    case Coef::hAlpha: return "h_a";
    case Coef::OscFrequency: return "osc_frequency";
    case Coef::LadderFrequency: return "ladder_frequency";
    case Coef::CoulombCoupling: return "coulomb_coupling";
    case Coef::CoulombLadder: return "coulomb_ladder";
    case Coef::ShiftEnergy: return "shift_energy";
    case Coef::ShiftLadder: return "shift_ladder";
    case Coef::ShiftCoulomb: return "shift_coulomb";
    case Coef::Count: break;
    }
    throw std::invalid_argument("invalid coefficient");
}

void ModelParams::validate() const
{
    if (!(g > 0.0) || !std::isfinite(g)) {
        throw DomainError("coupling g must be a finite positive number");
    }
    if (!(omega >= 0.0) || !std::isfinite(omega)) {
        throw std::invalid_argument("oscillator frequency must be finite and nonnegative");
    }
    if (!std::isfinite(gamma)) {
        throw std::invalid_argument("Coulomb coupling must be finite");
    }
}

void check_indices(const GeneratorId& id, std::size_t dimension)
{
    const int m = static_cast<int>(dimension) - 1;
    const int ar = id.arity();
    const auto bad = [&](int i) { return i < 0 || i >= m; };
    if ((ar >= 1 && bad(id.alpha)) || (ar == 2 && bad(id.beta))) {
        throw std::out_of_range("generator " + id.label() + " has an index outside 1.." +
                                std::to_string(m) + " (N = " + std::to_string(dimension) + ")");
    }
}

namespace {

using std::sqrt;

template <class T>
T sum_Haa(const Vars<T>& x, const T& A)
{
    T s = constant_like(A, 0.0);
    for (std::size_t c = 0; c < x.angular_dim(); ++c) {
        s += x.zbar(c) * x.z(c);
    }
    return s / A;
}

template <class T>
T evaluate_direct(const GeneratorId& id, const Vars<T>& x, const ModelParams& p)
{
    const auto& s = p.scales;
    const double g = p.g;
    const T A = factor_A(x, g);
    const T& w = x.w();
    const T& wb = x.wbar();
    const std::size_t a = static_cast<std::size_t>(std::max(id.alpha, 0));
    const std::size_t b = static_cast<std::size_t>(std::max(id.beta, 0));
    const double sq2 = std::sqrt(2.0);

    const auto H = [&] { return s[Coef::H] * w * wb / A; };
    const auto K = [&] { return s[Coef::K] / A; };
    const auto D = [&] { return s[Coef::D] * (w + wb) / A; };
    const auto Ha = [&](std::size_t i) { return s[Coef::HAlpha] * x.zbar(i) / A; };
    const auto HaN = [&](std::size_t i) { return s[Coef::HAlphaN] * x.zbar(i) * w / A; };
    const auto S = [&] { return s[Coef::HAlphaBeta] * sum_Haa(x, A); };
    const auto Hosc = [&] { return H() + s[Coef::OscFrequency] * p.omega * p.omega * K(); };
    const auto ladder = [&](std::size_t i, double sign) {
        return HaN(i) + sign * kI * s[Coef::LadderFrequency] * p.omega * Ha(i);
    };
    const auto HCoul = [&] { return H() - s[Coef::CoulombCoupling] * p.gamma / sqrt(2.0 * K()); };
    const auto R = [&](std::size_t i) {
        return HaN(i) + kI * s[Coef::CoulombLadder] * p.gamma * Ha(i) / ((g + S()) * sqrt(2.0 * K()));
    };
    const auto shift = [&] { return s[Coef::ShiftEnergy] * g * (g + 2.0 * S()) / (4.0 * K()); };
    const auto calHaN = [&](std::size_t i) { return HaN(i) + kI * s[Coef::ShiftLadder] * g * Ha(i) / (2.0 * K()); };
    const auto calLadder = [&](std::size_t i, double sign) {
        return calHaN(i) + sign * kI * s[Coef::LadderFrequency] * p.omega * Ha(i);
    };

    switch (id.tag) {
    case Gen::hNN: return s[Coef::hNN] * (w * wb + 1.0) / A;
    case Gen::hAlphaN: return s[Coef::hAlphaN] * x.zbar(a) * (1.0 - kI * w) / (sq2 * A);
    case Gen::hAlphaBeta: {
        T num = x.zbar(a) * x.z(b);
        if (a == b) {
            num += 0.5 * (1.0 + kI * w) * (1.0 - kI * wb);
        }
        return s[Coef::hAlphaBeta] * num / A;
    }
    case Gen::hN: return s[Coef::hN] * (1.0 + kI * w) * (1.0 + kI * wb) / A;
    case Gen::hAlpha: return s[Coef::hAlpha] * sq2 * x.zbar(a) * (1.0 + kI * w) / A;
    case Gen::H: return H();
    case Gen::K: return K();
    case Gen::D: return D();
    case Gen::HAlpha: return Ha(a);
    case Gen::HAlphaN: return HaN(a);
    case Gen::HAlphaBeta: return s[Coef::HAlphaBeta] * x.zbar(a) * x.z(b) / A;
    case Gen::A: return ladder(a, +1.0);
    case Gen::B: return ladder(a, -1.0);
    case Gen::M: {
        const double sn = s[Coef::HAlphaN];
        const double om = s[Coef::LadderFrequency] * s[Coef::HAlpha] * p.omega;
        return x.zbar(a) * x.zbar(b) * (sn * sn * w * w + om * om) / (A * A);
    }
    case Gen::R: return R(a);
    case Gen::Hosc: return Hosc();
    case Gen::HCoul: return HCoul();
    case Gen::ShiftedH: return H() - shift();
    case Gen::ShiftedHAlphaN: return calHaN(a);
    case Gen::ShiftedA: return calLadder(a, +1.0);
    case Gen::ShiftedB: return calLadder(a, -1.0);
    case Gen::ShiftedR: {
        const T r2K = sqrt(2.0 * K());
        const T Sv = S();
        return R(a) + kI * s[Coef::ShiftCoulomb] * g * Ha(a) / r2K * (1.0 / r2K + p.gamma / ((g + Sv) * Sv));
    }
    case Gen::ShiftedHosc: return Hosc() - shift();
    case Gen::ShiftedHCoul: return HCoul() - shift();
    }
    throw std::logic_error("unhandled generator tag");
}

// Jet of f(y(x)) from the gradient of f in the slots of y and the jets y(x).
Jet compose(const Jet& outer, const Vars<Jet>& x)
{
    const std::size_t n = x.dim();
    const std::size_t m = x.u.front().dim();
    Jet r = Jet::constant(outer.value(), m);
    for (std::size_t a = 0; a < n; ++a) {
        r += outer.du(a) * (x.u[a] - x.u[a].value());
        r += outer.dv(a) * (x.v[a] - x.v[a].value());
    }
    return r;
}

} // namespace

template <class T>
T evaluate(const GeneratorId& id, const Vars<T>& x, const ModelParams& params)
{
    check_indices(id, x.dim());
    if (!id.conjugate) {
        return evaluate_direct(id, x, params);
    }
    GeneratorId base = id;
    base.conjugate = false;
    if constexpr (std::is_same_v<T, Jet>) {
        Point values;
        for (const auto& u : x.u) {
            values.u.push_back(u.value());
        }
        for (const auto& v : x.v) {
            values.v.push_back(v.value());
        }
        const Jet outer = evaluate_direct(base, seed_jets(swapped_conjugate(values)), params).swapped_conjugate();
        return compose(outer, x);
    } else {
        return std::conj(evaluate_direct(base, swapped_conjugate(x), params));
    }
}

template cplx evaluate<cplx>(const GeneratorId&, const Vars<cplx>&, const ModelParams&);
template Jet evaluate<Jet>(const GeneratorId&, const Vars<Jet>&, const ModelParams&);

cplx evaluate_value(const GeneratorId& id, const Point& p, const ModelParams& params)
{
    return evaluate(id, p, params);
}

Jet evaluate_jet(const GeneratorId& id, const Point& p, const ModelParams& params)
{
    check_indices(id, p.dim());
    if (!id.conjugate) {
        return evaluate_direct(id, seed_jets(p), params);
    }
    GeneratorId base = id;
    base.conjugate = false;
    return evaluate_direct(base, seed_jets(swapped_conjugate(p)), params).swapped_conjugate();
}

cplx eval(const GeneratorId& id, const KleinPoint& p, const ModelParams& params)
{
    params.validate();
    return evaluate_value(id, p.coords(), params);
}

ScalarField generator_field(const GeneratorId& id, const ModelParams& params)
{
    return ScalarField{
        id.label(),
        [id, params](const Point& x) { return evaluate_value(id, x, params); },
        [id, params](const Point& x) { return evaluate_jet(id, x, params); },
    };
}

std::vector<GeneratorId> all_generators(std::size_t dimension)
{
    const int m = static_cast<int>(dimension) - 1;
    std::vector<GeneratorId> out;
    for (const auto& t : kTags) {
        if (t.arity == 0) {
            out.push_back(GeneratorId::of(t.tag));
        } else if (t.arity == 1) {
            for (int a = 0; a < m; ++a) {
                out.push_back(GeneratorId::of(t.tag, a));
            }
        } else {
            for (int a = 0; a < m; ++a) {
                for (int b = 0; b < m; ++b) {
                    out.push_back(GeneratorId::of(t.tag, a, b));
                }
            }
        }
    }
    return out;
}

std::vector<GeneratorId> convenient_basis(std::size_t dimension)
{
    const int m = static_cast<int>(dimension) - 1;
    std::vector<GeneratorId> out{GeneratorId::of(Gen::H), GeneratorId::of(Gen::K), GeneratorId::of(Gen::D)};
    for (int a = 0; a < m; ++a) {
        out.push_back(GeneratorId::of(Gen::HAlpha, a));
        out.push_back(GeneratorId::of(Gen::HAlphaN, a));
    }
    for (int a = 0; a < m; ++a) {
        for (int b = 0; b < m; ++b) {
            out.push_back(GeneratorId::of(Gen::HAlphaBeta, a, b));
        }
    }
    return out;
}

std::vector<GeneratorId> h_basis(std::size_t dimension)
{
    const int m = static_cast<int>(dimension) - 1;
    std::vector<GeneratorId> out{GeneratorId::of(Gen::hNN), GeneratorId::of(Gen::hN)};
    for (int a = 0; a < m; ++a) {
        out.push_back(GeneratorId::of(Gen::hAlphaN, a));
        out.push_back(GeneratorId::of(Gen::hAlpha, a));
    }
    for (int a = 0; a < m; ++a) {
        for (int b = 0; b < m; ++b) {
            out.push_back(GeneratorId::of(Gen::hAlphaBeta, a, b));
        }
    }
    return out;
}

DependencyReport dependency_identities(const KleinPoint& p, const ModelParams& params)
{
    params.validate();
    DependencyReport rep;
    const Point x = p.coords();
    const int m = static_cast<int>(p.dimension()) - 1;
    const auto v = [&](Gen t, int a = -1, int b = -1) { return evaluate_value(GeneratorId::of(t, a, b), x, params); };
    const auto vc = [&](Gen t, int a = -1) { return evaluate_value(GeneratorId::of(t, a).conj(), x, params); };

    const cplx K = v(Gen::K);
    for (int a = 0; a < m; ++a) {
        for (int b = 0; b < m; ++b) {
            const cplx rhs = v(Gen::HAlpha, a) * vc(Gen::HAlpha, b) / K;
            const cplx lhs = v(Gen::HAlphaBeta, a, b);
            rep.factorisation_residual =
                std::max(rep.factorisation_residual, normalized_residual(std::abs(lhs - rhs), std::abs(rhs)));
        }
    }

    for (int a = 0; a < m; ++a) {
        if (std::abs(p.z(a)) < kDivisionGuard) {
            rep.skipped = true;
            rep.note = "z^" + std::to_string(a + 1) + " below the division guard; energy identities skipped";
            return rep;
        }
    }
    const cplx H = v(Gen::H);
    cplx printed = 0.0;
    for (int a = 0; a < m; ++a) {
        const cplx term = v(Gen::HAlphaN, a) * vc(Gen::HAlphaN, a) / v(Gen::HAlphaBeta, a, a);
        rep.energy_residual = std::max(rep.energy_residual, normalized_residual(std::abs(term - H), std::abs(H)));
        printed += 0.5 * term;
    }
    rep.printed_energy_residual = m > 0 ? normalized_residual(std::abs(printed - H), std::abs(H)) : 0.0;
    return rep;
}

KleinPoint duality(const KleinPoint& p)
{
    const cplx w = p.w();
    std::vector<cplx> z = p.z();
    for (auto& c : z) {
        c /= w;
    }
    return KleinPoint(-1.0 / w, std::move(z));
}

AlgebraReport duality_check(std::size_t dimension, double g, std::size_t samples, std::uint64_t seed, double tol)
{
    ModelParams params;
    params.g = g;
    params.validate();
    const int m = static_cast<int>(dimension) - 1;

    struct Check {
        std::string label;
        std::function<std::pair<cplx, cplx>(const KleinPoint&, const KleinPoint&)> sides; // (lhs at dual, rhs)
        bool gating;
        std::string note;
    };
    const auto at = [&](const KleinPoint& q, GeneratorId id) { return eval(id, q, params); };
    const auto gid = [](Gen t, int a = -1, int b = -1) { return GeneratorId::of(t, a, b); };

    std::vector<Check> checks;
    checks.push_back({"H(dual)=K", [&](const KleinPoint& p, const KleinPoint& q) {
                          return std::pair{at(q, gid(Gen::H)), at(p, gid(Gen::K))};
                      }, true, ""});
    checks.push_back({"K(dual)=H", [&](const KleinPoint& p, const KleinPoint& q) {
                          return std::pair{at(q, gid(Gen::K)), at(p, gid(Gen::H))};
                      }, true, ""});
    checks.push_back({"D(dual)=-D", [&](const KleinPoint& p, const KleinPoint& q) {
                          return std::pair{at(q, gid(Gen::D)), -at(p, gid(Gen::D))};
                      }, true, ""});
    for (int a = 0; a < m; ++a) {
        const std::string s = std::to_string(a + 1);
        for (int b = 0; b < m; ++b) {
            const std::string ab = s + "," + std::to_string(b + 1);
            checks.push_back({"H_" + ab + "(dual)=H_" + ab, [&, a, b](const KleinPoint& p, const KleinPoint& q) {
                                  return std::pair{at(q, gid(Gen::HAlphaBeta, a, b)), at(p, gid(Gen::HAlphaBeta, a, b))};
                              }, true, ""});
        }
        checks.push_back({"H_" + s + "N(dual)=-H_" + s, [&, a](const KleinPoint& p, const KleinPoint& q) {
                              return std::pair{at(q, gid(Gen::HAlphaN, a)), -at(p, gid(Gen::HAlpha, a))};
                          }, true, ""});
        checks.push_back({"H_" + s + "(dual)=H_" + s + "N", [&, a](const KleinPoint& p, const KleinPoint& q) {
                              return std::pair{at(q, gid(Gen::HAlpha, a)), at(p, gid(Gen::HAlphaN, a))};
                          }, true, "sign opposite to the commonly quoted H_a -> -H_aN"});
        checks.push_back({"H_" + s + "(dual)=-H_" + s + "N (as printed)",
                          [&, a](const KleinPoint& p, const KleinPoint& q) {
                              return std::pair{at(q, gid(Gen::HAlpha, a)), -at(p, gid(Gen::HAlphaN, a))};
                          }, false, "diagnostic: quoted sign"});
    }
    const auto distance = [](const KleinPoint& a, const KleinPoint& b) {
        double d = std::abs(a.w() - b.w());
        for (std::size_t k = 0; k < a.z().size(); ++k) {
            d = std::max(d, std::abs(a.z(k) - b.z(k)));
        }
        return d;
    };
    checks.push_back({"dual(dual)=id", [&](const KleinPoint& p, const KleinPoint& q) {
                          return std::pair{cplx(distance(duality(q), p)), cplx(0.0)};
                      }, true, "dual(dual)(w,z) = (w,-z): not an involution when z != 0"});
    checks.push_back({"dual^4=id", [&](const KleinPoint& p, const KleinPoint& q) {
                          return std::pair{cplx(distance(duality(duality(duality(q))), p)), cplx(0.0)};
                      }, false, "diagnostic: order of the map"});

    AlgebraReport report;
    report.suite = "duality";
    for (const auto& c : checks) {
        RelationResult r;
        r.label = c.label;
        r.tolerance = tol;
        r.gating = c.gating;
        r.note = c.note;
        report.relations.push_back(r);
    }
    DomainSampler sampler(seed);
    for (std::size_t s = 0; s < samples; ++s) {
        const KleinPoint p = sampler.klein(dimension);
        const KleinPoint q = duality(p);
        for (std::size_t k = 0; k < checks.size(); ++k) {
            const auto [lhs, rhs] = checks[k].sides(p, q);
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

namespace {

using V = const GeneratorValues&;

cplx kd(int a, int b) { return a == b ? 1.0 : 0.0; }
GeneratorId gid(Gen t, int a = -1, int b = -1) { return GeneratorId::of(t, a, b); }
std::string n1(int a) { return std::to_string(a + 1); }

cplx sum_S(V v, int m)
{
    cplx s = 0.0;
    for (int c = 0; c < m; ++c) {
        s += v(gid(Gen::HAlphaBeta, c, c));
    }
    return s;
}

void require_dimension(std::size_t dimension)
{
    if (dimension < 2) {
        throw std::invalid_argument("this check needs N >= 2");
    }
}

// M_{αβ} against the product A_α B_β it is built from.
RelationResult factorisation_check(std::size_t dimension, const ModelParams& params, std::size_t samples,
                                   std::uint64_t seed, double tol)
{
    const int m = static_cast<int>(dimension) - 1;
    RelationResult r;
    r.label = "M_ab=A_a*B_b";
    r.tolerance = tol;
    DomainSampler sampler(seed);
    for (std::size_t s = 0; s < samples; ++s) {
        const Point x = sampler.klein(dimension).coords();
        for (int a = 0; a < m; ++a) {
            for (int b = 0; b < m; ++b) {
                const cplx lhs = evaluate_value(gid(Gen::M, a, b), x, params);
                const cplx rhs = evaluate_value(gid(Gen::A, a), x, params) * evaluate_value(gid(Gen::B, b), x, params);
                r.residual = std::max(r.residual, normalized_residual(std::abs(lhs - rhs), std::abs(rhs)));
            }
        }
        r.samples += 1;
    }
    r.passed = r.residual < tol;
    return r;
}

} // namespace

AlgebraReport oscillator_algebra_check(std::size_t dimension, const ModelParams& params, std::size_t samples,
                                       std::uint64_t seed, double tol)
{
    require_dimension(dimension);
    params.validate();
    const int m = static_cast<int>(dimension) - 1;
    const double om = params.omega;
    const auto Hosc = gid(Gen::Hosc);
    std::vector<Relation> R;
    for (int a = 0; a < m; ++a) {
        const std::string s = n1(a);
        const auto A = gid(Gen::A, a), B = gid(Gen::B, a);
        R.push_back({"{Hosc,A_" + s + "}=-iwA", {Hosc}, {A}, [=](V v) { return -kI * om * v(A); }});
        R.push_back({"{Hosc,B_" + s + "}=iwB", {Hosc}, {B}, [=](V v) { return kI * om * v(B); }});
        for (int b = 0; b < m; ++b) {
            const std::string ab = s + "," + n1(b);
            const auto Hab = gid(Gen::HAlphaBeta, a, b);
            const auto Ab = gid(Gen::A, b), Bb = gid(Gen::B, b);
            R.push_back({"{A_" + s + ",conj(A_" + n1(b) + ")}", {A}, {Ab.conj()}, [=](V v) {
                             return -kI * (v(Hosc) - om * (v.g() + sum_S(v, m))) * kd(a, b) + 2.0 * kI * om * v(Hab);
                         }});
            R.push_back({"{B_" + s + ",conj(B_" + n1(b) + ")}", {B}, {Bb.conj()}, [=](V v) {
                             return -kI * (v(Hosc) + om * (v.g() + sum_S(v, m))) * kd(a, b) - 2.0 * kI * om * v(Hab);
                         }});
            R.push_back({"{A_" + s + ",conj(B_" + n1(b) + ")}", {A}, {Bb.conj()}, [=](V v) {
                             return -kI * kd(a, b) *
                                    (v(Hosc) - 2.0 * om * om * v(gid(Gen::K)) + kI * om * v(gid(Gen::D)));
                         }});
            const auto M = gid(Gen::M, a, b);
            R.push_back({"{Hosc,M_" + ab + "}=0", {Hosc}, {M}, [](V) { return cplx(0.0); }});
            for (int c = 0; c < m; ++c) {
                const std::string bc = n1(b) + "," + n1(c);
                const auto Hbc = gid(Gen::HAlphaBeta, b, c);
                R.push_back({"{A_" + s + ",H_" + bc + "}", {A}, {Hbc}, [=](V v) { return -kI * kd(a, c) * v(gid(Gen::A, b)); }});
                R.push_back({"{B_" + s + ",H_" + bc + "}", {B}, {Hbc}, [=](V v) { return -kI * kd(a, c) * v(gid(Gen::B, b)); }});
                for (int e = 0; e < m; ++e) {
                    const std::string ce = n1(c) + "," + n1(e);
                    const auto Mce = gid(Gen::M, c, e);
                    R.push_back({"{H_" + ab + ",M_" + ce + "}", {Hab}, {Mce}, [=](V v) {
                                     return kI * kd(b, c) * v(gid(Gen::M, a, e)) + kI * kd(b, e) * v(gid(Gen::M, c, a));
                                 }});
                    R.push_back({"{M_" + ab + ",M_" + ce + "}=0", {M}, {Mce}, [](V) { return cplx(0.0); }});
                }
            }
        }
    }
    AlgebraReport report = run_relations("oscillator", R, dimension, params, samples, seed, tol);
    report.relations.push_back(factorisation_check(dimension, params, samples, seed, 1e-12));
    return report;
}

AlgebraReport coulomb_algebra_check(std::size_t dimension, const ModelParams& params, std::size_t samples,
                                    std::uint64_t seed, double tol)
{
    require_dimension(dimension);
    params.validate();
    const int m = static_cast<int>(dimension) - 1;
    const double gam = params.gamma;
    const auto HC = gid(Gen::HCoul);
    std::vector<Relation> R;
    for (int a = 0; a < m; ++a) {
        const std::string s = n1(a);
        const auto Ra = gid(Gen::R, a);
        R.push_back({"{HCoul,R_" + s + "}=0", {HC}, {Ra}, [](V) { return cplx(0.0); }});
        for (int b = 0; b < m; ++b) {
            const std::string ab = s + "," + n1(b);
            const auto Rb = gid(Gen::R, b);
            const auto Hab = gid(Gen::HAlphaBeta, a, b);
            R.push_back({"{HCoul,H_" + ab + "}=0", {HC}, {Hab}, [](V) { return cplx(0.0); }});
            R.push_back({"{R_" + s + ",R_" + n1(b) + "}=0", {Ra}, {Rb}, [](V) { return cplx(0.0); }});
            R.push_back({"{R_" + s + ",conj(R_" + n1(b) + ")}", {Ra}, {Rb.conj()}, [=](V v) {
                             const cplx sg = v.g() + sum_S(v, m);
                             return -kI * kd(a, b) * (v(HC) + gam * gam / (2.0 * sg * sg)) +
                                    kI * gam * gam * v(Hab) / (sg * sg * sg);
                         }});
            R.push_back({"{R_" + s + ",conj(R_" + n1(b) + ")} (as printed)", {Ra}, {Rb.conj()},
                         [=](V v) {
                             const cplx sg = v.g() + sum_S(v, m);
                             return -kI * kd(a, b) * (v(HC) - kI * gam * gam / (2.0 * sg * sg)) +
                                    kI * gam * gam * v(Hab) / (2.0 * sg * sg * sg);
                         },
                         false, "diagnostic: quoted closed form"});
            for (int c = 0; c < m; ++c) {
                R.push_back({"{H_" + ab + ",R_" + n1(c) + "}", {Hab}, {gid(Gen::R, c)},
                             [=](V v) { return kI * kd(c, b) * v(gid(Gen::R, a)); }});
            }
        }
    }
    return run_relations("coulomb", R, dimension, params, samples, seed, tol);
}

AlgebraReport shifted_system_check(std::size_t dimension, const ModelParams& params, std::size_t samples,
                                   std::uint64_t seed, double tol)
{
    require_dimension(dimension);
    params.validate();
    const int m = static_cast<int>(dimension) - 1;
    const auto cH = gid(Gen::ShiftedH), cHosc = gid(Gen::ShiftedHosc), cHC = gid(Gen::ShiftedHCoul);
    const auto zero = [](V) { return cplx(0.0); };
    std::vector<Relation> R;
    for (int a = 0; a < m; ++a) {
        const std::string s = n1(a);
        R.push_back({"{calH,calH_" + s + "N}=0", {cH}, {gid(Gen::ShiftedHAlphaN, a)}, zero});
        R.push_back({"{calHCoul,calR_" + s + "}=0", {cHC}, {gid(Gen::ShiftedR, a)}, zero});
        for (int b = 0; b < m; ++b) {
            const std::string ab = s + "," + n1(b);
            const auto Hab = gid(Gen::HAlphaBeta, a, b);
            R.push_back({"{calH,H_" + ab + "}=0", {cH}, {Hab}, zero});
            R.push_back({"{calHosc,H_" + ab + "}=0", {cHosc}, {Hab}, zero});
            R.push_back({"{calHCoul,H_" + ab + "}=0", {cHC}, {Hab}, zero});
            R.push_back({"{calHosc,calA_" + s + "*calB_" + n1(b) + "}=0", {cHosc},
                         {gid(Gen::ShiftedA, a), gid(Gen::ShiftedB, b)}, zero});
        }
    }
    return run_relations("shifted", R, dimension, params, samples, seed, tol);
}

AlgebraReport killing_check(std::size_t dimension, double g, std::size_t samples, std::uint64_t seed,
                            double tol)
{
    ModelParams params;
    params.g = g;
    std::vector<GeneratorId> ids = convenient_basis(dimension);
    const auto hb = h_basis(dimension);
    ids.insert(ids.end(), hb.begin(), hb.end());

    AlgebraReport report;
    report.suite = "killing";
    for (const auto& id : ids) {
        const ScalarField f = generator_field(id, params);
        RelationResult r;
        r.label = "killing(" + id.label() + ")";
        r.tolerance = tol;
        DomainSampler sampler(seed);
        for (std::size_t s = 0; s < samples; ++s) {
            r.residual = std::max(r.residual, killing_residual(sampler.klein(dimension), Coupling(g), f).normalized());
            r.samples += 1;
        }
        r.passed = r.residual < tol;
        report.relations.push_back(r);
    }
    return report;
}

} // namespace kcp
