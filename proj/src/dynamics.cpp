#include "kcp/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/numeric/odeint.hpp>

#include "kcp/geometry.hpp"
#include "kcp/poisson.hpp"

namespace kcp {

Scheme parse_scheme(const std::string& name)
{
    if (name == "adaptive-complex") {
        return Scheme::AdaptiveComplex;
    }
    if (name == "canonical-splitting") {
        return Scheme::CanonicalSplitting;
    }
    throw std::invalid_argument("unknown scheme '" + name + "' (expected adaptive-complex or canonical-splitting)");
}

std::string scheme_name(Scheme s)
{
    return s == Scheme::AdaptiveComplex ? "adaptive-complex" : "canonical-splitting";
}

void IntegratorConfig::validate() const
{
    if (!(relTol > 0.0) || !(absTol > 0.0)) {
        throw std::invalid_argument("integrator tolerances must be positive");
    }
    if (!(tFinal >= 0.0) || !std::isfinite(tFinal)) {
        throw std::invalid_argument("tFinal must be finite and nonnegative");
    }
    if (!(maxStep >= 0.0) || !(sampleInterval >= 0.0)) {
        throw std::invalid_argument("maxStep and sampleInterval must be nonnegative");
    }
}

double IntegratorConfig::sample_interval() const
{
    if (sampleInterval > 0.0) {
        return sampleInterval;
    }
    return tFinal > 0.0 ? tFinal / 1000.0 : 1.0;
}

double IntegratorConfig::splitting_step() const
{
    const double cap = maxStep > 0.0 ? maxStep : 1e-3;
    return std::min(cap, std::pow(relTol, 0.25) / 3.0);
}

namespace {

// Sample times 0, Δ, 2Δ, ..., with tFinal appended when not on the grid.
std::vector<double> sample_times(const IntegratorConfig& cfg)
{
    std::vector<double> t{0.0};
    if (cfg.tFinal == 0.0) {
        return t;
    }
    const double dt = cfg.sample_interval();
    const auto n = static_cast<std::size_t>(std::floor(cfg.tFinal / dt + 1e-9));
    for (std::size_t k = 1; k <= n; ++k) {
        t.push_back(std::min(static_cast<double>(k) * dt, cfg.tFinal));
    }
    if (cfg.tFinal - t.back() > 1e-12 * cfg.tFinal) {
        t.push_back(cfg.tFinal);
    }
    t.erase(std::unique(t.begin(), t.end()), t.end());
    return t;
}

using State = std::vector<double>;

State pack(const KleinPoint& p)
{
    State y{p.w().real(), p.w().imag()};
    for (const auto& z : p.z()) {
        y.push_back(z.real());
        y.push_back(z.imag());
    }
    return y;
}

Point unpack(const State& y)
{
    Point x;
    for (std::size_t k = 0; k < y.size(); k += 2) {
        x.u.emplace_back(y[k], y[k + 1]);
        x.v.emplace_back(y[k], -y[k + 1]);
    }
    return x;
}

bool state_in_domain(const State& y, double g)
{
    const Point x = unpack(y);
    std::vector<cplx> z(x.u.begin() + 1, x.u.end());
    if (!KleinPoint::in_domain(x.u[0], z)) {
        return false;
    }
    // A -> infinity is the collision r -> 0, the other end of the chart.
    const double A = factor_A(x, g).real();
    return A >= kConditioningFloor && A <= 1.0 / kConditioningFloor;
}

KleinPoint klein_of(const State& y)
{
    const Point x = unpack(y);
    return KleinPoint(x.u[0], std::vector<cplx>(x.u.begin() + 1, x.u.end()));
}

} // namespace

Trajectory flow_complex(const GeneratorId& hamiltonian, const KleinPoint& p0, const ModelParams& params,
                        const IntegratorConfig& cfg)
{
    namespace odeint = boost::numeric::odeint;
    cfg.validate();
    params.validate();
    check_indices(hamiltonian, p0.dimension());
    if (!hamiltonian.real_valued()) {
        throw std::invalid_argument("flow needs a real-valued Hamiltonian, got " + hamiltonian.label());
    }
    const Coupling g(params.g);

    Trajectory traj;
    traj.chart = "klein";
    const auto push = [&](double t, const State& y) {
        const KleinPoint p = klein_of(y);
        traj.samples.push_back({t, p, klein_to_canonical(p, g)});
    };

    const auto rhs = [&](const State& y, State& dy, double) {
        const Point x = unpack(y);
        const Jet h = evaluate_jet(hamiltonian, x, params);
        const CMatrix T = bracket_table(x, params.g);
        const std::size_t n = x.dim();
        dy.resize(y.size());
        for (std::size_t c = 0; c < n; ++c) {
            cplx v = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                v += T(c, j) * h.du(j) + T(c, n + j) * h.dv(j);
            }
            dy[2 * c] = v.real();
            dy[2 * c + 1] = v.imag();
        }
    };

    State y = pack(p0);
    const auto times = sample_times(cfg);
    push(0.0, y);
    if (times.size() == 1) {
        return traj;
    }

    const double max_dt = cfg.maxStep > 0.0 ? cfg.maxStep : cfg.tFinal;
    auto stepper = odeint::make_dense_output(cfg.absTol, cfg.relTol, max_dt, odeint::runge_kutta_dopri5<State>());
    stepper.initialize(y, 0.0, std::min(1e-3, max_dt));
    std::size_t next = 1;
    State probe(y.size());
    try {
        while (next < times.size()) {
            const auto [t0, t1] = stepper.do_step(rhs);
            if (t1 - t0 < 1e-14 * std::max(1.0, std::abs(t1))) {
                throw odeint::step_adjustment_error("step below 1e-14");
            }
            if (!state_in_domain(stepper.current_state(), params.g)) {
                // Bisect to the last in-domain time of this step.
                double lo = t0, hi = t1;
                for (int it = 0; it < 60 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
                    const double mid = 0.5 * (lo + hi);
                    stepper.calc_state(mid, probe);
                    (state_in_domain(probe, params.g) ? lo : hi) = mid;
                }
                while (next < times.size() && times[next] <= lo) {
                    stepper.calc_state(times[next], probe);
                    push(times[next], probe);
                    ++next;
                }
                stepper.calc_state(lo, probe);
                if (lo > traj.samples.back().t) {
                    push(lo, probe);
                }
                traj.status = TrajectoryStatus::DomainExit;
                traj.message = "trajectory left the Klein domain near t = " + std::to_string(lo);
                return traj;
            }
            while (next < times.size() && times[next] <= t1) {
                stepper.calc_state(times[next], probe);
                push(times[next], probe);
                ++next;
            }
        }
    } catch (const odeint::step_adjustment_error& e) {
        traj.status = TrajectoryStatus::DomainExit;
        traj.message = std::string("step size underflow: ") + e.what();
    }
    return traj;
}

Trajectory flow_complex(const HamiltonianSystem& sys, const KleinPoint& p0, const IntegratorConfig& cfg)
{
    if (!sys.klein_hamiltonian) {
        throw std::invalid_argument("the " + system_kind_name(sys.kind) +
                                    " system is integrated in the canonical chart only");
    }
    return flow_complex(*sys.klein_hamiltonian, p0, sys.params, cfg);
}

namespace {

struct CanonicalState {
    double r, p;
    std::vector<double> phi, pi;
};

class Splitting {
public:
    explicit Splitting(const HamiltonianSystem& sys) : sys_(sys) {}

    // Fourth-order composition of the symmetric drift-kick-drift step.
    void step(CanonicalState& s, double h)
    {
        static const double cbrt2 = std::cbrt(2.0);
        static const double w1 = 1.0 / (2.0 - cbrt2);
        static const double w0 = -cbrt2 / (2.0 - cbrt2);
        strang(s, w1 * h);
        strang(s, w0 * h);
        strang(s, w1 * h);
    }

private:
    void strang(CanonicalState& s, double h)
    {
        s.r += 0.5 * h * s.p;
        kick(s, h);
        s.r += 0.5 * h * s.p;
    }

    // Exact flow of 𝓘(π, φ)/r² + V(r) at fixed r.
    void kick(CanonicalState& s, double h)
    {
        const double r2 = s.r * s.r;
        if (!sys_.angular.phi_dependent) {
            sys_.angular.gradient(s.pi, s.phi, dpi_, dphi_);
            const double I = sys_.angular.value(s.pi, s.phi);
            s.p += h * (2.0 * I / (r2 * s.r) - sys_.potential_derivative(s.r));
            for (std::size_t a = 0; a < s.phi.size(); ++a) {
                s.phi[a] += h * dpi_[a] / r2;
            }
            return;
        }
        const double I0 = sys_.angular.value(s.pi, s.phi);
        angular_flow(s, h / r2, std::abs(h));
        const double I1 = sys_.angular.value(s.pi, s.phi);
        s.p += h * (2.0 * 0.5 * (I0 + I1) / (r2 * s.r) - sys_.potential_derivative(s.r));
    }

    // Implicit midpoint for the angular Hamiltonian over time tau.
    void angular_flow(CanonicalState& s, double tau, double max_sub)
    {
        const int n = std::max(1, static_cast<int>(std::ceil(std::abs(tau) / max_sub)));
        const double dt = tau / n;
        const std::size_t m = s.phi.size();
        std::vector<double> mphi(m), mpi(m), nphi(m), npi(m);
        for (int k = 0; k < n; ++k) {
            nphi = s.phi;
            npi = s.pi;
            for (int it = 0; it < 100; ++it) {
                for (std::size_t a = 0; a < m; ++a) {
                    mphi[a] = 0.5 * (s.phi[a] + nphi[a]);
                    mpi[a] = std::max(0.0, 0.5 * (s.pi[a] + npi[a]));
                }
                sys_.angular.gradient(mpi, mphi, dpi_, dphi_);
                double change = 0.0;
                for (std::size_t a = 0; a < m; ++a) {
                    const double fphi = s.phi[a] + dt * dpi_[a];
                    const double fpi = s.pi[a] - dt * dphi_[a];
                    change = std::max({change, std::abs(fphi - nphi[a]), std::abs(fpi - npi[a])});
                    nphi[a] = fphi;
                    npi[a] = fpi;
                }
                if (change < 1e-15) {
                    break;
                }
            }
            s.phi = nphi;
            s.pi = npi;
        }
    }

    const HamiltonianSystem& sys_;
    std::vector<double> dpi_, dphi_;
};

} // namespace

Trajectory flow_canonical(const HamiltonianSystem& sys, const RadialCanonicalPoint& c0, const IntegratorConfig& cfg)
{
    cfg.validate();
    c0.validate();
    if (c0.dimension() != sys.dimension()) {
        throw std::invalid_argument("initial state has dimension " + std::to_string(c0.dimension()) +
                                    ", system has " + std::to_string(sys.dimension()));
    }
    const Coupling g(sys.params.g);
    Trajectory traj;
    traj.chart = "canonical";

    CanonicalState s{c0.r, c0.p_r, c0.phi, c0.pi};
    const auto push = [&](double t) {
        RadialCanonicalPoint c;
        c.r = s.r;
        c.p_r = s.p;
        c.pi = s.pi;
        c.phi.resize(s.phi.size());
        std::transform(s.phi.begin(), s.phi.end(), c.phi.begin(), wrap_angle);
        c.degenerate.resize(s.pi.size());
        for (std::size_t a = 0; a < s.pi.size(); ++a) {
            c.degenerate[a] = s.pi[a] == 0.0;
        }
        traj.samples.push_back({t, canonical_to_klein(c, g), c});
    };
    const auto valid = [&] {
        if (!(s.r > 0.0) || !std::isfinite(s.r) || !std::isfinite(s.p)) {
            return false;
        }
        return std::all_of(s.pi.begin(), s.pi.end(), [](double v) { return v >= 0.0 && std::isfinite(v); });
    };

    const auto times = sample_times(cfg);
    push(0.0);
    Splitting scheme(sys);
    const double h = cfg.splitting_step();
    for (std::size_t k = 1; k < times.size(); ++k) {
        const double span = times[k] - times[k - 1];
        const int n = std::max(1, static_cast<int>(std::ceil(span / h - 1e-9)));
        const double hk = span / n;
        for (int i = 0; i < n; ++i) {
            const CanonicalState before = s;
            scheme.step(s, hk);
            if (!valid()) {
                s = before;
                push(times[k - 1] + i * hk);
                traj.status = TrajectoryStatus::DomainExit;
                traj.message = "radial collision (r -> 0) near t = " + std::to_string(times[k - 1] + i * hk);
                return traj;
            }
        }
        push(times[k]);
    }
    return traj;
}

Trajectory simulate(const HamiltonianSystem& sys, const RadialCanonicalPoint& c0, const IntegratorConfig& cfg)
{
    if (cfg.scheme == Scheme::CanonicalSplitting) {
        return flow_canonical(sys, c0, cfg);
    }
    return flow_complex(sys, canonical_to_klein(c0, Coupling(sys.params.g)), cfg);
}

double InvariantAudit::max_relative() const
{
    double m = 0.0;
    for (const auto& e : entries) {
        m = std::max(m, e.max_relative);
    }
    return m;
}

const IntegralDrift* InvariantAudit::find(const std::string& label) const
{
    for (const auto& e : entries) {
        if (e.label == label) {
            return &e;
        }
    }
    return nullptr;
}

InvariantAudit audit(const Trajectory& traj, const std::vector<NamedIntegral>& integrals)
{
    if (traj.samples.empty()) {
        throw std::invalid_argument("cannot audit an empty trajectory");
    }
    InvariantAudit out;
    for (const auto& f : integrals) {
        IntegralDrift d;
        d.label = f.label;
        const cplx f0 = f.value(traj.samples.front().klein, traj.samples.front().canonical);
        d.initial_abs = std::abs(f0);
        const double scale = std::max(1.0, std::abs(f0));
        for (const auto& s : traj.samples) {
            const double diff = std::abs(f.value(s.klein, s.canonical) - f0);
            d.max_absolute = std::max(d.max_absolute, diff);
            d.max_relative = std::max(d.max_relative, diff / scale);
            d.series.push_back(diff / scale);
        }
        out.entries.push_back(std::move(d));
    }
    return out;
}

namespace oracle {

double conformal_K(double t, double K0, double D0, double H) { return K0 + D0 * t + H * t * t; }

double oscillator_r2(double t, double r0, double p0, double energy, double omega)
{
    const double u_eq = energy / (omega * omega);
    const double u0 = r0 * r0;
    const double du0 = 2.0 * r0 * p0;
    return u_eq + (u0 - u_eq) * std::cos(2.0 * omega * t) + du0 / (2.0 * omega) * std::sin(2.0 * omega * t);
}

double oscillator_radial_period(double omega) { return M_PI / omega; }

double k_flow_momentum(double t, double r0, double p0) { return p0 - r0 * t; }

} // namespace oracle

} // namespace kcp
