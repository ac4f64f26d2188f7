#include "kcp/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <unistd.h>

#include "kcp/charts.hpp"
#include "kcp/generators.hpp"
#include "kcp/poisson.hpp"

namespace kcp::cli {

using nlohmann::json;

namespace {

template <class T>
T get_as(const json& j, const char* key)
{
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw std::invalid_argument(std::string("config key '") + key + "' is missing or has the wrong type");
    }
}

void reject_unknown(const json& j, std::initializer_list<const char*> allowed, const std::string& where)
{
    for (const auto& item : j.items()) {
        bool ok = false;
        for (const char* a : allowed) {
            ok = ok || item.key() == a;
        }
        if (!ok) {
            throw std::invalid_argument("unknown key '" + item.key() + "' in " + where);
        }
    }
}

cplx complex_from(const json& j)
{
    if (j.is_number()) {
        return {j.get<double>(), 0.0};
    }
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
        return {j[0].get<double>(), j[1].get<double>()};
    }
    throw std::invalid_argument("complex numbers are written as [re, im] or a plain real number");
}

json complex_to(cplx z) { return json::array({z.real(), z.imag()}); }

std::vector<cplx> complex_list(const json& j, const char* key)
{
    std::vector<cplx> out;
    if (!j.contains(key)) {
        return out;
    }
    if (!j.at(key).is_array()) {
        throw std::invalid_argument(std::string("'") + key + "' must be an array");
    }
    for (const auto& e : j.at(key)) {
        out.push_back(complex_from(e));
    }
    return out;
}

std::vector<double> real_list(const json& j, const char* key)
{
    if (!j.contains(key)) {
        return {};
    }
    return get_as<std::vector<double>>(j, key);
}

std::vector<Rational> parse_weights(const json& j)
{
    std::vector<Rational> out;
    for (const auto& e : j) {
        if (e.is_number_integer()) {
            out.push_back({e.get<long>(), 1});
        } else if (e.is_string()) {
            out.push_back(Rational::parse(e.get<std::string>()));
        } else {
            throw std::invalid_argument("weights are integers or strings like \"3/2\"");
        }
    }
    return out;
}

std::vector<std::string> split_list(const std::string& s)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

std::vector<double> parse_real_list(const std::string& s)
{
    std::vector<double> out;
    for (const auto& item : split_list(s)) {
        std::size_t used = 0;
        const double v = std::stod(item, &used);
        if (used != item.size()) {
            throw std::invalid_argument("not a number: '" + item + "'");
        }
        out.push_back(v);
    }
    return out;
}

NamedPreset parse_preset(const json& j)
{
    reject_unknown(j, {"name", "s", "omega", "g_a", "degrees", "multiplicities"}, "preset");
    NamedPreset p;
    p.kind = NamedPreset::parse_kind(get_as<std::string>(j, "name"));
    if (j.contains("s")) {
        p.s = get_as<double>(j, "s");
    }
    if (j.contains("omega")) {
        p.omega = get_as<double>(j, "omega");
    }
    if (j.contains("g_a")) {
        p.g_a = get_as<std::vector<double>>(j, "g_a");
    }
    if (j.contains("degrees")) {
        p.degrees = get_as<std::vector<long>>(j, "degrees");
    }
    if (j.contains("multiplicities")) {
        p.multiplicities = get_as<std::vector<double>>(j, "multiplicities");
    }
    return p;
}

std::string csv_label(std::string s)
{
    for (auto& c : s) {
        if (c == ',') {
            c = '_';
        }
    }
    return s;
}

KleinPoint klein_from_json(const json& j)
{
    reject_unknown(j, {"w", "z"}, "klein point");
    if (!j.contains("w")) {
        throw std::invalid_argument("klein point needs 'w'");
    }
    return KleinPoint(complex_from(j.at("w")), complex_list(j, "z"));
}

RadialCanonicalPoint canonical_from_json(const json& j)
{
    reject_unknown(j, {"r", "p_r", "phi", "pi"}, "canonical point");
    RadialCanonicalPoint c;
    c.r = get_as<double>(j, "r");
    c.p_r = get_as<double>(j, "p_r");
    c.phi = real_list(j, "phi");
    c.pi = real_list(j, "pi");
    c.degenerate.assign(c.pi.size(), false);
    c.validate();
    return c;
}

CanonicalXPoint x_from_json(const json& j)
{
    reject_unknown(j, {"x", "p_x", "phi", "pi"}, "x-chart point");
    CanonicalXPoint c;
    c.x = get_as<double>(j, "x");
    c.p_x = get_as<double>(j, "p_x");
    c.phi = real_list(j, "phi");
    c.pi = real_list(j, "pi");
    return c;
}

json to_json(const KleinPoint& p)
{
    json z = json::array();
    for (const auto& v : p.z()) {
        z.push_back(complex_to(v));
    }
    return {{"w", complex_to(p.w())}, {"z", z}};
}

json to_json(const RadialCanonicalPoint& c)
{
    return {{"r", c.r}, {"p_r", c.p_r}, {"phi", c.phi}, {"pi", c.pi}};
}

json to_json(const CanonicalXPoint& c) { return {{"x", c.x}, {"p_x", c.p_x}, {"phi", c.phi}, {"pi", c.pi}}; }

json to_json(const PoincarePoint& q)
{
    json z = json::array();
    for (const auto& v : q.z()) {
        z.push_back(complex_to(v));
    }
    return {{"z", z}};
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

void emit(const std::string& path, const std::string& text, std::ostream& out)
{
    if (path.empty() || path == "-") {
        out << text;
    } else {
        write_atomic(path, text);
    }
}

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::invalid_argument("cannot read " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

// ---------------------------------------------------------------------------

std::uint64_t default_seed()
{
    const char* s = std::getenv("SEED");
    if (s == nullptr || *s == '\0') {
        return 7;
    }
    try {
        std::size_t used = 0;
        const auto v = std::stoull(s, &used);
        if (used == std::string(s).size()) {
            return v;
        }
    } catch (const std::exception&) {
    }
    throw std::invalid_argument(std::string("SEED must be a nonnegative integer, got '") + s + "'");
}

std::string format_double(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_atomic(const std::filesystem::path& path, const std::string& contents)
{
    auto tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) {
            throw std::runtime_error("cannot write " + tmp.string());
        }
        f << contents;
        f.flush();
        if (!f) {
            throw std::runtime_error("write failed for " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, path);
}

json report_json(const AlgebraReport& r)
{
    json rel = json::array();
    for (const auto& e : r.relations) {
        rel.push_back({{"label", e.label},
                       {"residual", e.residual},
                       {"tolerance", e.tolerance},
                       {"samples", e.samples},
                       {"passed", e.passed},
                       {"gating", e.gating},
                       {"skipped", e.skipped},
                       {"note", e.note}});
    }
    return {{"suite", r.suite},
            {"passed", r.passed()},
            {"max_residual", r.max_residual()},
            {"relations", rel},
            {"notes", r.notes}};
}

// ---------------------------------------------------------------------------

RunConfig parse_config(const json& j)
{
    if (!j.is_object()) {
        throw std::invalid_argument("config must be a JSON object");
    }
    reject_unknown(j,
                   {"system", "N", "g", "omega", "gamma", "weights", "preset", "shifted", "initial", "integrator",
                    "seed", "drift_tol", "output"},
                   "config");
    RunConfig c;
    c.seed = default_seed();
    if (j.contains("system")) {
        c.system = parse_system_kind(get_as<std::string>(j, "system"));
    }
    if (j.contains("N")) {
        c.dimension = get_as<std::size_t>(j, "N");
    }
    if (j.contains("g")) {
        c.g = get_as<double>(j, "g");
    }
    if (j.contains("omega")) {
        c.omega = get_as<double>(j, "omega");
    }
    if (j.contains("gamma")) {
        c.gamma = get_as<double>(j, "gamma");
    }
    if (j.contains("weights")) {
        c.weights = parse_weights(j.at("weights"));
    }
    if (j.contains("preset")) {
        c.preset = parse_preset(j.at("preset"));
    }
    if (j.contains("shifted")) {
        c.shifted = get_as<bool>(j, "shifted");
    }
    if (j.contains("initial")) {
        const json& ini = j.at("initial");
        if (!ini.is_object()) {
            throw std::invalid_argument("'initial' must be an object");
        }
        c.initial.chart = ini.value("chart", std::string("canonical"));
        c.initial.data = ini;
        c.initial.data.erase("chart");
    }
    if (j.contains("integrator")) {
        const json& in = j.at("integrator");
        reject_unknown(in, {"scheme", "rel_tol", "abs_tol", "max_step", "t_final", "sample_interval"}, "integrator");
        if (in.contains("scheme")) {
            c.integrator.scheme = parse_scheme(get_as<std::string>(in, "scheme"));
        }
        if (in.contains("rel_tol")) {
            c.integrator.relTol = get_as<double>(in, "rel_tol");
        }
        if (in.contains("abs_tol")) {
            c.integrator.absTol = get_as<double>(in, "abs_tol");
        }
        if (in.contains("max_step")) {
            c.integrator.maxStep = get_as<double>(in, "max_step");
        }
        if (in.contains("t_final")) {
            c.integrator.tFinal = get_as<double>(in, "t_final");
        }
        if (in.contains("sample_interval")) {
            c.integrator.sampleInterval = get_as<double>(in, "sample_interval");
        }
    }
    if (j.contains("seed")) {
        c.seed = get_as<std::uint64_t>(j, "seed");
    }
    if (j.contains("drift_tol")) {
        c.drift_tol = get_as<double>(j, "drift_tol");
    }
    if (j.contains("output")) {
        const json& o = j.at("output");
        reject_unknown(o, {"csv", "audit"}, "output");
        c.csv_path = o.value("csv", std::string());
        c.audit_path = o.value("audit", std::string());
    }
    return c;
}

RunConfig load_config(const std::filesystem::path& path)
{
    json j;
    try {
        j = json::parse(read_file(path));
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("config " + path.string() + " is not valid JSON: " + e.what());
    }
    return parse_config(j);
}

AngularModel RunConfig::model() const
{
    AngularModel m;
    if (preset) {
        m = preset_angular(*preset);
    } else if (!weights.empty()) {
        m.n = weights;
        m.g = g;
        m.label = "weights";
    } else {
        std::size_t n = dimension.value_or(0);
        if (n == 0) {
            const auto& d = initial.data;
            n = d.contains("pi") ? d.at("pi").size() + 1
                : d.contains("z") ? d.at("z").size() + 1
                : d.contains("I") ? d.at("I").size() + 1
                                  : 2;
        }
        m = AngularModel::uniform(n, g);
    }
    if (dimension && *dimension != m.dimension()) {
        throw std::invalid_argument("N = " + std::to_string(*dimension) + " does not match the angular model (N = " +
                                    std::to_string(m.dimension()) + ")");
    }
    m.validate();
    return m;
}

HamiltonianSystem RunConfig::system_built() const
{
    const AngularModel m = model();
    ModelParams params;
    params.g = m.g;
    params.omega = system == SystemKind::Oscillator ? omega : 0.0;
    params.gamma = system == SystemKind::Coulomb ? gamma : 0.0;
    return build_system(system, m, params, std::nullopt, shifted);
}

RadialCanonicalPoint RunConfig::initial_canonical() const
{
    const AngularModel m = model();
    const Coupling gc(m.g);
    RadialCanonicalPoint c;
    const json& d = initial.data;
    if (initial.chart == "canonical") {
        c = canonical_from_json(d);
    } else if (initial.chart == "klein") {
        c = klein_to_canonical(klein_from_json(d), gc);
    } else if (initial.chart == "x") {
        c = canonical_x_chart_inverse(x_from_json(d));
    } else if (initial.chart == "action_angle") {
        reject_unknown(d, {"r", "p_r", "I", "Phi"}, "action-angle state");
        const auto I = real_list(d, "I");
        const auto Phi = real_list(d, "Phi");
        if (I.size() != m.n.size() || Phi.size() != m.n.size()) {
            throw std::invalid_argument("action-angle state needs one I and one Phi per weight");
        }
        std::vector<ActionAngleState> s;
        for (std::size_t a = 0; a < I.size(); ++a) {
            s.push_back({I[a], Phi[a], m.n[a]});
        }
        c.r = get_as<double>(d, "r");
        c.p_r = get_as<double>(d, "p_r");
        action_angle_embed(s, c.phi, c.pi);
        c.degenerate.assign(c.pi.size(), false);
    } else {
        throw std::invalid_argument("unknown chart '" + initial.chart + "' (canonical, klein, x, action_angle)");
    }
    c.validate();
    if (c.dimension() != m.dimension()) {
        throw std::invalid_argument("initial state has dimension " + std::to_string(c.dimension()) +
                                    ", the model has N = " + std::to_string(m.dimension()));
    }
    return c;
}

// ---------------------------------------------------------------------------

std::string trajectory_csv(const Trajectory& traj, const HamiltonianSystem& sys)
{
    const std::size_t m = sys.dimension() - 1;
    std::string out = "t,r,p_r";
    for (std::size_t a = 1; a <= m; ++a) {
        out += ",phi_" + std::to_string(a);
    }
    for (std::size_t a = 1; a <= m; ++a) {
        out += ",pi_" + std::to_string(a);
    }
    out += ",Re_w,Im_w";
    for (std::size_t a = 1; a <= m; ++a) {
        out += ",Re_z" + std::to_string(a) + ",Im_z" + std::to_string(a);
    }
    out += ",E,K,D";
    for (std::size_t k = 1; k < sys.integrals.size(); ++k) {
        const std::string l = csv_label(sys.integrals[k].label);
        out += ",Re_" + l + ",Im_" + l;
    }
    out += "\n";

    const GeneratorId K = GeneratorId::of(Gen::K), D = GeneratorId::of(Gen::D);
    for (const auto& s : traj.samples) {
        const auto& c = s.canonical;
        c.validate();
        if (c.dimension() != sys.dimension() || !KleinPoint::in_domain(s.klein.w(), s.klein.z())) {
            throw DomainError("trajectory row at t = " + format_double(s.t) + " violates the chart invariants");
        }
        std::string row = format_double(s.t) + "," + format_double(c.r) + "," + format_double(c.p_r);
        for (double v : c.phi) {
            row += "," + format_double(v);
        }
        for (double v : c.pi) {
            row += "," + format_double(v);
        }
        row += "," + format_double(s.klein.w().real()) + "," + format_double(s.klein.w().imag());
        for (const auto& z : s.klein.z()) {
            row += "," + format_double(z.real()) + "," + format_double(z.imag());
        }
        row += "," + format_double(sys.energy(c));
        row += "," + format_double(eval(K, s.klein, sys.params).real());
        row += "," + format_double(eval(D, s.klein, sys.params).real());
        for (std::size_t k = 1; k < sys.integrals.size(); ++k) {
            const cplx v = sys.integrals[k].value(s.klein, c);
            row += "," + format_double(v.real()) + "," + format_double(v.imag());
        }
        out += row + "\n";
    }
    return out;
}

Trajectory read_trajectory_csv(const std::string& text, const HamiltonianSystem& sys)
{
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) {
        throw std::invalid_argument("trajectory table is empty");
    }
    const auto header = split_list(line);
    const auto column = [&](const std::string& name) {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (header[i] == name) {
                return i;
            }
        }
        throw std::invalid_argument("trajectory table has no column '" + name + "'");
    };
    const std::size_t m = sys.dimension() - 1;
    const std::size_t ct = column("t"), cr = column("r"), cp = column("p_r");
    std::vector<std::size_t> cphi, cpi;
    for (std::size_t a = 1; a <= m; ++a) {
        cphi.push_back(column("phi_" + std::to_string(a)));
        cpi.push_back(column("pi_" + std::to_string(a)));
    }
    if (header.size() > 3 + 2 * m && header[3 + 2 * m] != "Re_w") {
        throw std::invalid_argument("trajectory table does not match the model dimension N = " +
                                    std::to_string(sys.dimension()));
    }

    Trajectory traj;
    traj.chart = "canonical";
    const Coupling g(sys.params.g);
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) {
            continue;
        }
        std::vector<double> v;
        try {
            v = parse_real_list(line);
        } catch (const std::exception&) {
            throw std::invalid_argument("trajectory row " + std::to_string(row) + " is not numeric");
        }
        if (v.size() != header.size()) {
            throw std::invalid_argument("trajectory row " + std::to_string(row) + " has " + std::to_string(v.size()) +
                                        " fields, header has " + std::to_string(header.size()));
        }
        RadialCanonicalPoint c;
        c.r = v[cr];
        c.p_r = v[cp];
        for (std::size_t a = 0; a < m; ++a) {
            c.phi.push_back(v[cphi[a]]);
            c.pi.push_back(v[cpi[a]]);
        }
        c.degenerate.assign(m, false);
        c.validate();
        traj.samples.push_back({v[ct], canonical_to_klein(c, g), c});
    }
    if (traj.samples.empty()) {
        throw std::invalid_argument("trajectory table has no rows");
    }
    return traj;
}

json audit_json(const InvariantAudit& a, const Trajectory& traj, const RunConfig& cfg)
{
    const AngularModel m = cfg.model();
    json weights = json::array();
    for (const auto& n : m.n) {
        weights.push_back(n.str());
    }
    json entries = json::array();
    bool passed = traj.completed();
    for (const auto& e : a.entries) {
        const bool ok = e.max_relative < cfg.drift_tol;
        passed = passed && ok;
        entries.push_back({{"label", e.label},
                           {"initial_abs", e.initial_abs},
                           {"max_relative", e.max_relative},
                           {"max_absolute", e.max_absolute},
                           {"passed", ok}});
    }
    return {{"system", system_kind_name(cfg.system)},
            {"shifted", cfg.shifted},
            {"N", m.dimension()},
            {"g", m.g},
            {"omega", cfg.system == SystemKind::Oscillator ? cfg.omega : 0.0},
            {"gamma", cfg.system == SystemKind::Coulomb ? cfg.gamma : 0.0},
            {"model", m.label},
            {"weights", weights},
            {"scheme", scheme_name(cfg.integrator.scheme)},
            {"t_final", cfg.integrator.tFinal},
            {"status", traj.completed() ? "completed" : "domain_exit"},
            {"message", traj.message},
            {"samples", traj.samples.size()},
            {"t_last", traj.samples.empty() ? 0.0 : traj.back().t},
            {"drift_tolerance", cfg.drift_tol},
            {"max_relative_drift", a.max_relative()},
            {"passed", passed},
            {"integrals", entries}};
}

json transform_point(const std::string& from, const std::string& to, const json& point, double g, bool dual)
{
    const Coupling gc(g);
    if (!point.is_object()) {
        throw std::invalid_argument("--point must be a JSON object");
    }
    KleinPoint p = [&] {
        if (from == "klein") {
            return klein_from_json(point);
        }
        if (from == "poincare") {
            reject_unknown(point, {"z"}, "poincare point");
            return poincare_to_klein(PoincarePoint(complex_list(point, "z")));
        }
        if (from == "canonical") {
            return canonical_to_klein(canonical_from_json(point), gc);
        }
        if (from == "x") {
            return canonical_to_klein(canonical_x_chart_inverse(x_from_json(point)), gc);
        }
        throw std::invalid_argument("unknown chart '" + from + "' (klein, poincare, canonical, x)");
    }();
    if (dual) {
        p = duality(p);
    }

    json target;
    if (to == "klein") {
        target = to_json(p);
    } else if (to == "poincare") {
        target = to_json(klein_to_poincare(p));
    } else if (to == "canonical") {
        target = to_json(klein_to_canonical(p, gc));
    } else if (to == "x") {
        target = to_json(canonical_x_chart(klein_to_canonical(p, gc)));
    } else {
        throw std::invalid_argument("unknown chart '" + to + "' (klein, poincare, canonical, x)");
    }

    ModelParams params;
    params.g = g;
    const auto real_of = [&](Gen t) { return eval(GeneratorId::of(t), p, params).real(); };
    return {{"from", from},
            {"to", to},
            {"g", g},
            {"dual", dual},
            {"point", target},
            {"echo", {{"H", real_of(Gen::H)}, {"K", real_of(Gen::K)}, {"D", real_of(Gen::D)}}}};
}

// ---------------------------------------------------------------------------

namespace {

struct VerifyArgs {
    std::string suite;
    std::size_t n = 3;
    double g = 1.0;
    double omega = 1.0;
    double gamma = 1.0;
    std::size_t samples = 0;
    std::uint64_t seed = 7;
    double tol = 0.0;
    std::string out;
};

int cmd_verify(const VerifyArgs& a, std::ostream& out, std::ostream& err)
{
    const std::string& s = a.suite;
    if (a.n < 1) {
        throw std::invalid_argument("--n must be at least 1");
    }
    ModelParams params;
    params.g = a.g;
    params.omega = a.omega;
    params.gamma = a.gamma;
    params.validate();
    (void)Coupling(a.g);

    const auto samples = [&](std::size_t d) { return a.samples ? a.samples : d; };
    const auto tol = [&](double d) { return a.tol > 0.0 ? a.tol : d; };
    AlgebraReport report;
    double tolerance = 0.0;
    std::size_t used = 0;
    if (s == "algebra") {
        used = samples(200);
        tolerance = tol(1e-9);
        report = verify_structure_constants(a.n, a.g, used, a.seed, tolerance);
        report.append(jacobi_check(a.n, a.g, 20, 10, a.seed + 101, 1e-8));
        report.append(bracket_path_check(a.n, a.g, 1000, a.seed + 202, 1e-10));
    } else if (s == "killing") {
        used = samples(50);
        tolerance = tol(1e-6);
        report = killing_check(a.n, a.g, used, a.seed, tolerance);
    } else if (s == "symplecto") {
        used = samples(200);
        tolerance = tol(1e-10);
        report = symplectomorphism_check(a.n, a.g, used, a.seed, tolerance);
        report.append(chart_invariance_check(a.n, params, used, a.seed + 1, tolerance));
    } else if (s == "oscillator" || s == "coulomb" || s == "shifted") {
        used = samples(200);
        tolerance = tol(1e-9);
        if (a.n < 2) {
            throw std::invalid_argument("verify " + s + " needs --n >= 2");
        }
        report = s == "oscillator" ? oscillator_algebra_check(a.n, params, used, a.seed, tolerance)
                 : s == "coulomb"  ? coulomb_algebra_check(a.n, params, used, a.seed, tolerance)
                                   : shifted_system_check(a.n, params, used, a.seed, tolerance);
    } else if (s == "duality") {
        used = samples(100);
        tolerance = tol(1e-12);
        report = duality_check(a.n, a.g, used, a.seed, tolerance);
    } else {
        throw std::invalid_argument("unknown suite '" + s + "'");
    }
    report.suite = s;

    json j = report_json(report);
    j["command"] = "verify";
    j["N"] = a.n;
    j["g"] = a.g;
    j["omega"] = a.omega;
    j["gamma"] = a.gamma;
    j["samples"] = used;
    j["seed"] = a.seed;
    j["tolerance"] = tolerance;
    emit(a.out, dump(j), out);
    if (!report.passed()) {
        for (const auto& r : report.relations) {
            if (r.gating && !r.skipped && !r.passed) {
                err << "FAIL " << r.label << ": residual " << format_double(r.residual) << " >= "
                    << format_double(r.tolerance) << "\n";
            }
        }
        return kCheckFailed;
    }
    return kSuccess;
}

struct SimulateFlags {
    std::string config;
    std::optional<std::string> system;
    std::optional<std::size_t> n;
    std::optional<double> g, omega, gamma;
    std::optional<std::string> weights;
    bool shifted = false;
    std::optional<std::string> scheme;
    std::optional<double> t_final, rel_tol, abs_tol, max_step, sample_interval;
    std::optional<double> r, p_r;
    std::optional<std::string> phi, pi;
    std::optional<std::uint64_t> seed;
    std::optional<double> drift_tol;
    std::optional<std::string> csv, audit;
};

RunConfig resolve(const SimulateFlags& f)
{
    RunConfig c;
    c.seed = default_seed();
    if (!f.config.empty()) {
        c = load_config(f.config);
    }
    if (f.system) {
        c.system = parse_system_kind(*f.system);
    }
    if (f.n) {
        c.dimension = *f.n;
    }
    if (f.g) {
        c.g = *f.g;
    }
    if (f.omega) {
        c.omega = *f.omega;
    }
    if (f.gamma) {
        c.gamma = *f.gamma;
    }
    if (f.weights) {
        c.weights.clear();
        for (const auto& w : split_list(*f.weights)) {
            c.weights.push_back(Rational::parse(w));
        }
        c.preset.reset();
    }
    if (f.shifted) {
        c.shifted = true;
    }
    if (f.scheme) {
        c.integrator.scheme = parse_scheme(*f.scheme);
    }
    if (f.t_final) {
        c.integrator.tFinal = *f.t_final;
    }
    if (f.rel_tol) {
        c.integrator.relTol = *f.rel_tol;
    }
    if (f.abs_tol) {
        c.integrator.absTol = *f.abs_tol;
    }
    if (f.max_step) {
        c.integrator.maxStep = *f.max_step;
    }
    if (f.sample_interval) {
        c.integrator.sampleInterval = *f.sample_interval;
    }
    if (f.r || f.p_r || f.phi || f.pi) {
        if (c.initial.chart != "canonical") {
            c.initial = InitialState{};
        }
        if (f.r) {
            c.initial.data["r"] = *f.r;
        }
        if (f.p_r) {
            c.initial.data["p_r"] = *f.p_r;
        }
        if (f.phi) {
            c.initial.data["phi"] = parse_real_list(*f.phi);
        }
        if (f.pi) {
            c.initial.data["pi"] = parse_real_list(*f.pi);
        }
    }
    if (c.initial.data.is_null()) {
        throw std::invalid_argument("no initial state: give 'initial' in the config or --r/--p_r/--phi/--pi");
    }
    if (c.initial.chart == "canonical") {
        // p_r and the angular slots default to zero.
        const std::size_t m = c.model().n.size();
        auto& d = c.initial.data;
        if (!d.contains("p_r")) {
            d["p_r"] = 0.0;
        }
        if (!d.contains("phi")) {
            d["phi"] = std::vector<double>(m, 0.0);
        }
        if (!d.contains("pi")) {
            d["pi"] = std::vector<double>(m, 0.0);
        }
    }
    if (f.seed) {
        c.seed = *f.seed;
    }
    if (f.drift_tol) {
        c.drift_tol = *f.drift_tol;
    }
    if (f.csv) {
        c.csv_path = *f.csv;
    }
    if (f.audit) {
        c.audit_path = *f.audit;
    }
    c.integrator.validate();
    return c;
}

int cmd_simulate(const SimulateFlags& f, std::ostream& out, std::ostream& err)
{
    const RunConfig cfg = resolve(f);
    const HamiltonianSystem sys = cfg.system_built();
    const RadialCanonicalPoint c0 = cfg.initial_canonical();
    const Trajectory traj = simulate(sys, c0, cfg.integrator);
    const InvariantAudit au = audit(traj, sys.integrals);

    emit(cfg.csv_path, trajectory_csv(traj, sys), out);
    json j = audit_json(au, traj, cfg);
    j["command"] = "simulate";
    j["seed"] = cfg.seed;
    if (!cfg.audit_path.empty()) {
        write_atomic(cfg.audit_path, dump(j));
    }
    if (!traj.completed()) {
        err << "domain exit at t = " << format_double(traj.back().t) << ": " << traj.message << "\n";
        return kDomainExit;
    }
    return kSuccess;
}

struct AuditFlags {
    SimulateFlags sim;
    std::string trajectory;
    std::string out;
};

int cmd_audit(const AuditFlags& f, std::ostream& out, std::ostream& err)
{
    SimulateFlags sf = f.sim;
    RunConfig cfg = [&] {
        // The initial state is irrelevant here; a placeholder keeps resolve() happy.
        if (!sf.r) {
            sf.r = 1.0;
        }
        return resolve(sf);
    }();
    const HamiltonianSystem sys = cfg.system_built();
    const Trajectory traj = read_trajectory_csv(read_file(f.trajectory), sys);
    const InvariantAudit au = audit(traj, sys.integrals);
    json j = audit_json(au, traj, cfg);
    j["command"] = "audit";
    j["seed"] = cfg.seed;
    j["scheme"] = "recorded";
    j["t_final"] = traj.back().t;
    emit(f.out, dump(j), out);
    if (!j.at("passed").get<bool>()) {
        for (const auto& e : au.entries) {
            if (!(e.max_relative < cfg.drift_tol)) {
                err << "FAIL " << e.label << ": relative drift " << format_double(e.max_relative) << "\n";
            }
        }
        return kCheckFailed;
    }
    return kSuccess;
}

void add_system_flags(CLI::App* app, SimulateFlags& f)
{
    app->add_option("--config", f.config, "JSON run configuration; flags override its keys")->check(CLI::ExistingFile);
    app->add_option("--system", f.system, "conformal, oscillator or coulomb");
    app->add_option("--n", f.n, "complex dimension N");
    app->add_option("--g", f.g, "coupling g > 0");
    app->add_option("--omega", f.omega, "oscillator frequency");
    app->add_option("--gamma", f.gamma, "Coulomb coupling");
    app->add_option("--weights", f.weights, "angular weights n_a, e.g. 1,3/2");
    app->add_flag("--shifted", f.shifted, "use the g-shifted generators (standard oscillator/Coulomb)");
    app->add_option("--drift-tol", f.drift_tol, "relative drift tolerance of the audit");
    app->add_option("--seed", f.seed, "seed recorded in the report (default: $SEED or 7)");
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Klein-model phase space: su(1,N) algebra checks, flows and chart transforms", "kcp"};
    app.require_subcommand(1);

    VerifyArgs va;
    auto* verify = app.add_subcommand("verify", "run a verification suite and print a JSON report");
    verify->add_option("suite", va.suite, "algebra, killing, symplecto, oscillator, coulomb, shifted or duality")
        ->required()
        ->check(CLI::IsMember({"algebra", "killing", "symplecto", "oscillator", "coulomb", "shifted", "duality"}));
    verify->add_option("--n", va.n, "complex dimension N");
    verify->add_option("--g", va.g, "coupling g > 0");
    verify->add_option("--omega", va.omega, "oscillator frequency");
    verify->add_option("--gamma", va.gamma, "Coulomb coupling");
    verify->add_option("--samples", va.samples, "random points (suite default when omitted)");
    auto* seed_opt = verify->add_option("--seed", va.seed, "sampler seed (default: $SEED or 7)");
    verify->add_option("--tol", va.tol, "residual tolerance (suite default when omitted)");
    verify->add_option("--out", va.out, "report path (stdout when omitted)");

    SimulateFlags sf;
    auto* sim = app.add_subcommand("simulate", "integrate a flow; CSV trajectory plus JSON audit");
    add_system_flags(sim, sf);
    sim->add_option("--scheme", sf.scheme, "canonical-splitting or adaptive-complex");
    sim->add_option("--T", sf.t_final, "final time");
    sim->add_option("--rel-tol", sf.rel_tol, "relative tolerance");
    sim->add_option("--abs-tol", sf.abs_tol, "absolute tolerance");
    sim->add_option("--max-step", sf.max_step, "step cap");
    sim->add_option("--sample-interval", sf.sample_interval, "output spacing (default T/1000)");
    sim->add_option("--r", sf.r, "initial r");
    sim->add_option("--p_r", sf.p_r, "initial p_r");
    sim->add_option("--phi", sf.phi, "initial angles, comma separated");
    sim->add_option("--pi", sf.pi, "initial momenta, comma separated");
    sim->add_option("--csv", sf.csv, "trajectory path (stdout when omitted)");
    sim->add_option("--audit", sf.audit, "audit report path");

    AuditFlags af;
    auto* aud = app.add_subcommand("audit", "recompute the integrals along a stored trajectory");
    add_system_flags(aud, af.sim);
    aud->add_option("--trajectory", af.trajectory, "trajectory CSV written by simulate")
        ->required()
        ->check(CLI::ExistingFile);
    aud->add_option("--out", af.out, "report path (stdout when omitted)");

    std::string from, to, point_text;
    double tg = 1.0;
    bool dual = false;
    auto* tr = app.add_subcommand("transform", "convert a point between charts");
    tr->add_option("--from", from, "klein, poincare, canonical or x")->required();
    tr->add_option("--to", to, "klein, poincare, canonical or x")->required();
    tr->add_option("--point", point_text, "point as JSON")->required();
    tr->add_option("--g", tg, "coupling g > 0");
    tr->add_flag("--dual", dual, "apply the duality map before converting");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return kSuccess;
        }
        err << "kcp: " << e.what() << "\n";
        return kInvalidInput;
    }

    try {
        if (*verify) {
            if (seed_opt->count() == 0) {
                va.seed = default_seed();
            }
            return cmd_verify(va, out, err);
        }
        if (*sim) {
            return cmd_simulate(sf, out, err);
        }
        if (*aud) {
            return cmd_audit(af, out, err);
        }
        json point;
        try {
            point = json::parse(point_text);
        } catch (const json::parse_error& e) {
            throw std::invalid_argument(std::string("--point is not valid JSON: ") + e.what());
        }
        out << dump(transform_point(from, to, point, tg, dual));
        return kSuccess;
    } catch (const DomainError& e) {
        err << "kcp: domain error: " << e.what() << "\n";
        return kInvalidInput;
    } catch (const std::exception& e) {
        err << "kcp: " << e.what() << "\n";
        return kInvalidInput;
    }
}

} // namespace kcp::cli
