#include "kcp/poisson.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "kcp/sampling.hpp"

namespace kcp {

CoordLabel CoordLabel::parse(const std::string& s)
{
    if (s == "w") {
        return {0, false};
    }
    if (s == "wbar") {
        return {0, true};
    }
    const auto parse_index = [&](std::size_t prefix) -> std::size_t {
        const std::string digits = s.substr(prefix);
        if (digits.empty() || !std::all_of(digits.begin(), digits.end(), ::isdigit)) {
            throw std::invalid_argument("unknown coordinate label '" + s + "'");
        }
        const auto idx = std::stoul(digits);
        if (idx == 0) {
            throw std::invalid_argument("coordinate labels are 1-based: '" + s + "'");
        }
        return idx;
    };
    if (s.rfind("zbar", 0) == 0) {
        return {parse_index(4), true};
    }
    if (s.rfind("z", 0) == 0) {
        return {parse_index(1), false};
    }
    throw std::invalid_argument("unknown coordinate label '" + s + "'");
}

std::string CoordLabel::str() const
{
    if (slot == 0) {
        return conjugate ? "wbar" : "w";
    }
    return (conjugate ? "zbar" : "z") + std::to_string(slot);
}

CMatrix bracket_table(const Point& x, double g)
{
    const std::size_t n = x.dim();
    cplx L = kI * (x.u[0] - x.v[0]);
    for (std::size_t k = 1; k < n; ++k) {
        L -= x.u[k] * x.v[k];
    }
    const cplx A = L / g;
    CMatrix T = CMatrix::Zero(2 * n, 2 * n);
    T(0, n) = -A * (x.u[0] - x.v[0]);
    for (std::size_t k = 1; k < n; ++k) {
        T(0, n + k) = A * x.v[k];
        T(n, k) = A * x.u[k]; // {w̄, z^α}
        T(k, n + k) = kI * A;
    }
    for (std::size_t i = 0; i < 2 * n; ++i) {
        for (std::size_t j = i + 1; j < 2 * n; ++j) {
            if (T(i, j) != cplx(0.0)) {
                T(j, i) = -T(i, j);
            } else {
                T(i, j) = -T(j, i);
            }
        }
    }
    return T;
}

CMatrix bracket_table(const KleinPoint& p, Coupling g) { return bracket_table(p.coords(), g.value()); }

cplx fundamental_bracket(const KleinPoint& p, Coupling g, CoordLabel a, CoordLabel b)
{
    const std::size_t n = p.dimension();
    if (a.slot >= n || b.slot >= n) {
        throw std::invalid_argument("coordinate label out of range for N = " + std::to_string(n));
    }
    const auto T = bracket_table(p, g);
    const std::size_t i = a.slot + (a.conjugate ? n : 0);
    const std::size_t j = b.slot + (b.conjugate ? n : 0);
    return T(i, j);
}

cplx bracket_chain_rule(const Jet& f, const Jet& h, const CMatrix& table)
{
    const std::size_t n = f.dim();
    const auto grad = [n](const Jet& j, std::size_t i) { return i < n ? j.du(i) : j.dv(i - n); };
    cplx acc = 0.0;
    for (std::size_t i = 0; i < 2 * n; ++i) {
        const cplx fi = grad(f, i);
        if (fi == cplx(0.0)) {
            continue;
        }
        for (std::size_t j = 0; j < 2 * n; ++j) {
            const cplx t = table(i, j);
            if (t != cplx(0.0)) {
                acc += fi * t * grad(h, j);
            }
        }
    }
    return acc;
}

cplx bracket_metric(const Jet& f, const Jet& h, const CMatrix& inverse_metric)
{
    const std::size_t n = f.dim();
    cplx acc = 0.0;
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            acc += inverse_metric(a, b) * (f.du(b) * h.dv(a) - h.du(b) * f.dv(a));
        }
    }
    return kI * acc;
}

cplx bracket(const ScalarField& f, const ScalarField& h, const KleinPoint& p, Coupling g,
             BracketPath path)
{
    const Point x = p.coords();
    const Jet jf = f.jet(x);
    const Jet jh = h.jet(x);
    if (path == BracketPath::ChainRule) {
        return bracket_chain_rule(jf, jh, bracket_table(p, g));
    }
    return bracket_metric(jf, jh, geometry_sample(p, g).inverse_metric);
}

VectorField hamiltonian_vector_field(const ScalarField& h, const KleinPoint& p, Coupling g)
{
    const auto geo = geometry_sample(p, g);
    const Jet jh = h.jet(p.coords());
    const std::size_t n = p.dimension();
    VectorField V{std::vector<cplx>(n), std::vector<cplx>(n)};
    for (std::size_t c = 0; c < n; ++c) {
        cplx hol = 0.0, anti = 0.0;
        for (std::size_t a = 0; a < n; ++a) {
            hol += geo.inverse_metric(a, c) * jh.dv(a);
            anti += geo.inverse_metric(c, a) * jh.du(a);
        }
        V.hol[c] = kI * hol;
        V.anti[c] = -kI * anti;
    }
    return V;
}

VectorField hamiltonian_vector_field(const Jet& h, const KleinPoint& p, Coupling g)
{
    const auto T = bracket_table(p, g);
    const std::size_t n = p.dimension();
    VectorField V{std::vector<cplx>(n), std::vector<cplx>(n)};
    for (std::size_t c = 0; c < n; ++c) {
        cplx hol = 0.0, anti = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            hol += T(c, j) * h.du(j) + T(c, n + j) * h.dv(j);
            anti += T(n + c, j) * h.du(j) + T(n + c, n + j) * h.dv(j);
        }
        V.hol[c] = hol;
        V.anti[c] = anti;
    }
    return V;
}

// ---------------------------------------------------------------------------

cplx GeneratorValues::operator()(const GeneratorId& id) const
{
    for (const auto& [key, val] : cache_) {
        if (key == id) {
            return val;
        }
    }
    const cplx v = evaluate_value(id, p_, params_);
    cache_.emplace_back(id, v);
    return v;
}

namespace {

Jet product_jet(const std::vector<GeneratorId>& factors, const Point& x, const ModelParams& params)
{
    Jet acc = evaluate_jet(factors.front(), x, params);
    for (std::size_t i = 1; i < factors.size(); ++i) {
        acc *= evaluate_jet(factors[i], x, params);
    }
    return acc;
}

} // namespace

AlgebraReport run_relations(const std::string& suite, const std::vector<Relation>& relations,
                            std::size_t dimension, const ModelParams& params, std::size_t samples,
                            std::uint64_t seed, double tol)
{
    AlgebraReport report;
    report.suite = suite;
    report.relations.reserve(relations.size());
    for (const auto& rel : relations) {
        RelationResult r;
        r.label = rel.label;
        r.tolerance = tol;
        r.gating = rel.gating;
        r.note = rel.note;
        report.relations.push_back(r);
    }

    DomainSampler sampler(seed);
    const Coupling g(params.g);
    for (std::size_t s = 0; s < samples; ++s) {
        const KleinPoint p = sampler.klein(dimension);
        const Point x = p.coords();
        const CMatrix table = bracket_table(p, g);
        const GeneratorValues values(x, params);
        for (std::size_t k = 0; k < relations.size(); ++k) {
            const auto& rel = relations[k];
            const Jet f = product_jet(rel.left, x, params);
            const Jet h = product_jet(rel.right, x, params);
            const cplx lhs = bracket_chain_rule(f, h, table);
            const cplx rhs = rel.rhs(values);
            double res = normalized_residual(std::abs(lhs - rhs), std::abs(rhs));
            if (!std::isfinite(res)) {
                res = std::numeric_limits<double>::infinity();
            }
            auto& out = report.relations[k];
            out.residual = std::max(out.residual, res);
            out.samples += 1;
        }
    }
    for (auto& r : report.relations) {
        r.passed = r.residual < r.tolerance;
    }
    return report;
}

namespace {

cplx delta(int a, int b) { return a == b ? 1.0 : 0.0; }

GeneratorId id(Gen t, int a = -1, int b = -1) { return GeneratorId::of(t, a, b); }

std::string idx(int a) { return std::to_string(a + 1); }

} // namespace

std::vector<Relation> su1n_relations(std::size_t dimension)
{
    using V = const GeneratorValues&;
    std::vector<Relation> R;
    const auto H = id(Gen::H), K = id(Gen::K), D = id(Gen::D);
    R.push_back({"{H,K}=-D", {H}, {K}, [=](V v) { return -v(D); }});
    R.push_back({"{H,D}=-2H", {H}, {D}, [=](V v) { return -2.0 * v(H); }});
    R.push_back({"{K,D}=2K", {K}, {D}, [=](V v) { return 2.0 * v(K); }});

    const int m = static_cast<int>(dimension) - 1;
    const auto Ha = [](int a) { return id(Gen::HAlpha, a); };
    const auto HaN = [](int a) { return id(Gen::HAlphaN, a); };
    const auto Hab = [](int a, int b) { return id(Gen::HAlphaBeta, a, b); };

    for (int a = 0; a < m; ++a) {
        const std::string s = idx(a);
        R.push_back({"{H,H_" + s + "}=-H_" + s + "N", {H}, {Ha(a)}, [=](V v) { return -v(HaN(a)); }});
        R.push_back({"{H,H_" + s + "N}=0", {H}, {HaN(a)}, [](V) { return cplx(0.0); }});
        R.push_back({"{K,H_" + s + "N}=H_" + s, {K}, {HaN(a)}, [=](V v) { return v(Ha(a)); }});
        R.push_back({"{K,H_" + s + "}=0", {K}, {Ha(a)}, [](V) { return cplx(0.0); }});
        R.push_back({"{D,H_" + s + "}=-H_" + s, {D}, {Ha(a)}, [=](V v) { return -v(Ha(a)); }});
        R.push_back({"{D,H_" + s + "N}=H_" + s + "N", {D}, {HaN(a)}, [=](V v) { return v(HaN(a)); }});
        for (int b = 0; b < m; ++b) {
            const std::string ab = idx(a) + "," + idx(b);
            const std::string sb = idx(b);
            R.push_back({"{H,H_" + ab + "}=0", {H}, {Hab(a, b)}, [](V) { return cplx(0.0); }});
            R.push_back({"{K,H_" + ab + "}=0", {K}, {Hab(a, b)}, [](V) { return cplx(0.0); }});
            R.push_back({"{D,H_" + ab + "}=0", {D}, {Hab(a, b)}, [](V) { return cplx(0.0); }});
            R.push_back({"{H_" + s + ",H_" + sb + "}=0", {Ha(a)}, {Ha(b)}, [](V) { return cplx(0.0); }});
            R.push_back({"{H_" + s + "N,H_" + sb + "N}=0", {HaN(a)}, {HaN(b)}, [](V) { return cplx(0.0); }});
            R.push_back({"{H_" + s + ",H_" + sb + "N}=0", {Ha(a)}, {HaN(b)}, [](V) { return cplx(0.0); }});
            R.push_back({"{H_" + s + ",conj(H_" + sb + ")}=-iK d", {Ha(a)}, {Ha(b).conj()},
                         [=](V v) { return -kI * v(K) * delta(a, b); }});
            R.push_back({"{H_" + s + "N,conj(H_" + sb + "N)}=-iH d", {HaN(a)}, {HaN(b).conj()},
                         [=](V v) { return -kI * v(H) * delta(a, b); }});
            R.push_back({"{H_" + s + ",conj(H_" + sb + "N)}=H_" + ab + "+(g+S-iD)d/2", {Ha(a)},
                         {HaN(b).conj()}, [=](V v) {
                             cplx S = 0.0;
                             for (int c = 0; c < m; ++c) {
                                 S += v(Hab(c, c));
                             }
                             return v(Hab(a, b)) + 0.5 * (v.g() + S - kI * v(D)) * delta(a, b);
                         }});
            for (int c = 0; c < m; ++c) {
                const std::string bc = idx(b) + "," + idx(c);
                R.push_back({"{H_" + s + ",H_" + bc + "}=-iH_" + sb + " d", {Ha(a)}, {Hab(b, c)},
                             [=](V v) { return -kI * v(Ha(b)) * delta(a, c); }});
                R.push_back({"{H_" + s + "N,H_" + bc + "}=-iH_" + sb + "N d", {HaN(a)}, {Hab(b, c)},
                             [=](V v) { return -kI * v(HaN(b)) * delta(a, c); }});
                for (int e = 0; e < m; ++e) {
                    const std::string ce = idx(c) + "," + idx(e);
                    R.push_back({"{H_" + ab + ",H_" + ce + "}", {Hab(a, b)}, {Hab(c, e)}, [=](V v) {
                                     return kI * (v(Hab(a, e)) * delta(c, b) - v(Hab(c, b)) * delta(a, e));
                                 }});
                }
            }
        }
    }
    return R;
}

namespace {

// h-basis accessors with a, b in 0..N-1 where N-1 plays the role of index N.
struct HBasis {
    int n_index;

    GeneratorId pair(int a, int b) const
    {
        if (a == n_index && b == n_index) {
            return id(Gen::hNN);
        }
        if (b == n_index) {
            return id(Gen::hAlphaN, a);
        }
        if (a == n_index) {
            return id(Gen::hAlphaN, b).conj();
        }
        return id(Gen::hAlphaBeta, a, b);
    }
    GeneratorId vec(int a) const { return a == n_index ? id(Gen::hN) : id(Gen::hAlpha, a); }
    std::string name(int a) const { return a == n_index ? "N" : idx(a); }
};

} // namespace

std::vector<Relation> h_basis_relations(std::size_t dimension)
{
    using V = const GeneratorValues&;
    std::vector<Relation> R;
    const int n = static_cast<int>(dimension);
    const HBasis hb{n - 1};
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            const std::string sa = hb.name(a), sb = hb.name(b);
            R.push_back({"{h_" + sa + ",h_" + sb + "}=0", {hb.vec(a)}, {hb.vec(b)}, [](V) { return cplx(0.0); }});
            R.push_back({"{h_" + sa + ",conj(h_" + sb + ")}=-4i h_" + sa + sb, {hb.vec(a)}, {hb.vec(b).conj()},
                         [=](V v) { return -4.0 * kI * v(hb.pair(a, b)); }});
            for (int c = 0; c < n; ++c) {
                const std::string sc = hb.name(c);
                R.push_back({"{h_" + sa + ",h_" + sb + sc + "}", {hb.vec(a)}, {hb.pair(b, c)}, [=](V v) {
                                 return -kI * (delta(a, c) * v(hb.vec(b)) + delta(b, c) * v(hb.vec(a)));
                             }});
                for (int d = 0; d < n; ++d) {
                    const std::string sd = hb.name(d);
                    R.push_back({"{h_" + sa + sb + ",h_" + sc + sd + "}", {hb.pair(a, b)}, {hb.pair(c, d)},
                                 [=](V v) {
                                     return -kI * (delta(a, d) * v(hb.pair(c, b)) -
                                                   delta(b, c) * v(hb.pair(a, d)));
                                 }});
                }
            }
        }
    }
    return R;
}

AlgebraReport verify_structure_constants(std::size_t dimension, double g, std::size_t samples,
                                         std::uint64_t seed, double tol, const CoefficientScales& scales)
{
    if (dimension < 1) {
        throw std::invalid_argument("dimension N must be at least 1");
    }
    ModelParams params;
    params.g = g;
    params.scales = scales;
    params.validate();

    AlgebraReport report = run_relations("su(1,N)", su1n_relations(dimension), dimension, params,
                                         samples, seed, tol);
    if (dimension == 1) {
        report.notes.push_back("N = 1: only the conformal triple {H, K, D} is checked");
        return report;
    }
    report.append(run_relations("h-basis", h_basis_relations(dimension), dimension, params, samples,
                                seed + 1, tol));
    return report;
}

namespace {

// Gradient of a field analytic in each slot separately, by the Cauchy
// integral over a circle of 16 nodes. The only singularity is A = 0, at
// distance g|A| in w and g|A|/|z̄^α| in z^α; the radius is a tenth of that.
std::pair<std::vector<cplx>, std::vector<cplx>> cauchy_gradient(const ScalarField& f, const Point& x, double g)
{
    constexpr int kNodes = 16;
    const std::size_t n = x.dim();
    cplx L = kI * (x.u[0] - x.v[0]);
    for (std::size_t k = 1; k < n; ++k) {
        L -= x.u[k] * x.v[k];
    }
    const double gA = std::abs(L);
    std::vector<cplx> gu(n), gv(n);
    for (int side = 0; side < 2; ++side) {
        const bool hol = side == 0;
        for (std::size_t a = 0; a < n; ++a) {
            const double partner = a == 0 ? 1.0 : std::abs(hol ? x.v[a] : x.u[a]);
            const double radius = 0.1 * gA / std::max(partner, 1e-300);
            const double r = std::min(radius, 0.1 * std::max(1.0, gA / g));
            cplx acc = 0.0;
            for (int k = 0; k < kNodes; ++k) {
                const cplx e = std::polar(1.0, 2.0 * M_PI * k / kNodes);
                Point y = x;
                (hol ? y.u[a] : y.v[a]) += r * e;
                acc += f.value(y) / e;
            }
            (hol ? gu : gv)[a] = acc / (static_cast<double>(kNodes) * r);
        }
    }
    return {gu, gv};
}

} // namespace

AlgebraReport jacobi_check(std::size_t dimension, double g, std::size_t triples, std::size_t points,
                           std::uint64_t seed, double tol)
{
    ModelParams params;
    params.g = g;
    const auto basis = convenient_basis(dimension);
    DomainSampler sampler(seed);
    std::uniform_int_distribution<std::size_t> pick(0, basis.size() - 1);

    // {f,{g,h}} + {g,{h,f}} + {h,{f,g}}: the inner bracket is itself a field,
    // differentiated numerically from its off-slice values.
    const auto inner = [&](const GeneratorId& a, const GeneratorId& b) {
        const ScalarField fa = generator_field(a, params);
        const ScalarField fb = generator_field(b, params);
        const double gv = g;
        ScalarField out;
        out.label = "{" + a.label() + "," + b.label() + "}";
        out.value = [fa, fb, gv](const Point& x) {
            return bracket_chain_rule(fa.jet(x), fb.jet(x), bracket_table(x, gv));
        };
        out.jet = nullptr;
        return out;
    };

    AlgebraReport report;
    report.suite = "jacobi";
    for (std::size_t t = 0; t < triples; ++t) {
        const GeneratorId a = basis[pick(sampler.engine())];
        const GeneratorId b = basis[pick(sampler.engine())];
        const GeneratorId c = basis[pick(sampler.engine())];
        RelationResult r;
        r.label = "jacobi(" + a.label() + "," + b.label() + "," + c.label() + ")";
        r.tolerance = tol;
        const ScalarField bc = inner(b, c), ca = inner(c, a), ab = inner(a, b);
        for (std::size_t k = 0; k < points; ++k) {
            const KleinPoint p = sampler.klein(dimension);
            const Point x = p.coords();
            const CMatrix T = bracket_table(p, Coupling(g));
            const auto outer = [&](const GeneratorId& f, const ScalarField& in) {
                const Jet jf = evaluate_jet(f, x, params);
                const auto [gu, gv] = cauchy_gradient(in, x, g);
                // Jet rebuilt from the finite-difference gradient.
                Jet acc = Jet::constant(in.value(x), x.dim());
                for (std::size_t s = 0; s < x.dim(); ++s) {
                    acc += gu[s] * Jet::holomorphic_seed(0.0, x.dim(), s);
                    acc += gv[s] * Jet::antiholomorphic_seed(0.0, x.dim(), s);
                }
                return bracket_chain_rule(jf, acc, T);
            };
            const cplx t1 = outer(a, bc), t2 = outer(b, ca), t3 = outer(c, ab);
            const double scale = std::max({1.0, std::abs(t1), std::abs(t2), std::abs(t3)});
            r.residual = std::max(r.residual, std::abs(t1 + t2 + t3) / scale);
            r.samples += 1;
        }
        r.passed = r.residual < tol;
        report.relations.push_back(r);
    }
    return report;
}

AlgebraReport bracket_path_check(std::size_t dimension, double g, std::size_t draws, std::uint64_t seed,
                                 double tol)
{
    ModelParams params;
    params.g = g;
    params.omega = 1.0;
    params.gamma = 1.0;
    std::vector<GeneratorId> ids;
    for (const auto& id : all_generators(dimension)) {
        ids.push_back(id);
        if (!id.real_valued()) {
            ids.push_back(id.conj());
        }
    }
    DomainSampler sampler(seed);
    std::uniform_int_distribution<std::size_t> pick(0, ids.size() - 1);

    RelationResult r;
    r.label = "metric-path=chain-rule";
    r.tolerance = tol;
    for (std::size_t k = 0; k < draws; ++k) {
        const KleinPoint p = sampler.klein(dimension);
        const GeneratorId a = ids[pick(sampler.engine())];
        const GeneratorId b = ids[pick(sampler.engine())];
        const Point x = p.coords();
        const Jet ja = evaluate_jet(a, x, params);
        const Jet jb = evaluate_jet(b, x, params);
        const cplx chain = bracket_chain_rule(ja, jb, bracket_table(p, Coupling(g)));
        const cplx viaMetric = bracket_metric(ja, jb, geometry_sample(p, Coupling(g)).inverse_metric);
        r.residual = std::max(r.residual, normalized_residual(std::abs(viaMetric - chain), std::abs(chain)));
        r.samples += 1;
    }
    r.passed = r.residual < tol;

    AlgebraReport report;
    report.suite = "bracket-paths";
    report.relations.push_back(r);
    return report;
}

} // namespace kcp
