#pragma once

// First-order Wirtinger jets over the complexified Klein chart.
//
// A scalar field f(w, z, w̄, z̄) is treated as a holomorphic function of 2N
// independent complex variables: the holomorphic slots u = (w, z^1..z^{N-1})
// and the anti-holomorphic slots v = (w̄, z̄^1..z̄^{N-1}). On the real slice
// v = conj(u) the partials ∂f/∂u_a and ∂f/∂v_a are the Wirtinger derivatives
// ∂_a f and ∂_ā f. Every closed-form expression in this library is written
// once as a template over the scalar type, so it can be evaluated either on
// plain complex numbers (values, off-shell finite differences) or on Jet
// (exact gradients propagated by the chain rule).

#include <cmath>
#include <complex>
#include <cstddef>
#include <type_traits>
#include <vector>

namespace kcp {

using cplx = std::complex<double>;

inline constexpr cplx kI{0.0, 1.0};

class Jet {
public:
    Jet() = default;
    Jet(cplx value, std::size_t dim) : val_(value), du_(dim), dv_(dim) {}

    static Jet constant(cplx value, std::size_t dim) { return Jet(value, dim); }
    static Jet holomorphic_seed(cplx value, std::size_t dim, std::size_t slot)
    {
        Jet j(value, dim);
        j.du_[slot] = 1.0;
        return j;
    }
    static Jet antiholomorphic_seed(cplx value, std::size_t dim, std::size_t slot)
    {
        Jet j(value, dim);
        j.dv_[slot] = 1.0;
        return j;
    }

    cplx value() const { return val_; }
    std::size_t dim() const { return du_.size(); }
    // ∂f/∂u_a (holomorphic Wirtinger derivative)
    cplx du(std::size_t a) const { return du_[a]; }
    // ∂f/∂v_a (anti-holomorphic Wirtinger derivative)
    cplx dv(std::size_t a) const { return dv_[a]; }
    const std::vector<cplx>& grad_u() const { return du_; }
    const std::vector<cplx>& grad_v() const { return dv_; }

    // Apply an analytic function with value fx and derivative dfx at val_.
    Jet chain(cplx fx, cplx dfx) const
    {
        Jet r(fx, dim());
        for (std::size_t a = 0; a < dim(); ++a) {
            r.du_[a] = dfx * du_[a];
            r.dv_[a] = dfx * dv_[a];
        }
        return r;
    }

    Jet& operator+=(const Jet& o)
    {
        val_ += o.val_;
        for (std::size_t a = 0; a < dim(); ++a) {
            du_[a] += o.du_[a];
            dv_[a] += o.dv_[a];
        }
        return *this;
    }
    Jet& operator-=(const Jet& o)
    {
        val_ -= o.val_;
        for (std::size_t a = 0; a < dim(); ++a) {
            du_[a] -= o.du_[a];
            dv_[a] -= o.dv_[a];
        }
        return *this;
    }
    Jet& operator*=(const Jet& o)
    {
        for (std::size_t a = 0; a < dim(); ++a) {
            du_[a] = du_[a] * o.val_ + val_ * o.du_[a];
            dv_[a] = dv_[a] * o.val_ + val_ * o.dv_[a];
        }
        val_ *= o.val_;
        return *this;
    }
    Jet& operator/=(const Jet& o)
    {
        const cplx inv = 1.0 / o.val_;
        const cplx q = val_ * inv;
        for (std::size_t a = 0; a < dim(); ++a) {
            du_[a] = (du_[a] - q * o.du_[a]) * inv;
            dv_[a] = (dv_[a] - q * o.dv_[a]) * inv;
        }
        val_ = q;
        return *this;
    }
    Jet& operator+=(cplx c)
    {
        val_ += c;
        return *this;
    }
    Jet& operator-=(cplx c)
    {
        val_ -= c;
        return *this;
    }
    Jet& operator*=(cplx c)
    {
        val_ *= c;
        for (std::size_t a = 0; a < dim(); ++a) {
            du_[a] *= c;
            dv_[a] *= c;
        }
        return *this;
    }
    Jet& operator/=(cplx c) { return *this *= (1.0 / c); }

    Jet operator-() const
    {
        Jet r = *this;
        r *= -1.0;
        return r;
    }

    // Conjugate field f̄(u, v) = conj(f(conj v, conj u)), given the jet of f
    // evaluated at the swapped-conjugated point.
    Jet swapped_conjugate() const
    {
        Jet r(std::conj(val_), dim());
        for (std::size_t a = 0; a < dim(); ++a) {
            r.du_[a] = std::conj(dv_[a]);
            r.dv_[a] = std::conj(du_[a]);
        }
        return r;
    }

private:
    cplx val_{};
    std::vector<cplx> du_;
    std::vector<cplx> dv_;
};

inline Jet operator+(Jet a, const Jet& b) { return a += b; }
inline Jet operator-(Jet a, const Jet& b) { return a -= b; }
inline Jet operator*(Jet a, const Jet& b) { return a *= b; }
inline Jet operator/(Jet a, const Jet& b) { return a /= b; }
inline Jet operator+(Jet a, cplx c) { return a += c; }
inline Jet operator+(cplx c, Jet a) { return a += c; }
inline Jet operator-(Jet a, cplx c) { return a -= c; }
inline Jet operator-(cplx c, const Jet& a) { return (-a) += c; }
inline Jet operator*(Jet a, cplx c) { return a *= c; }
inline Jet operator*(cplx c, Jet a) { return a *= c; }
inline Jet operator/(Jet a, cplx c) { return a /= c; }
inline Jet operator/(cplx c, const Jet& a)
{
    const cplx inv = 1.0 / a.value();
    return a.chain(c * inv, -c * inv * inv);
}
inline Jet operator+(Jet a, double c) { return a += cplx(c); }
inline Jet operator+(double c, Jet a) { return a += cplx(c); }
inline Jet operator-(Jet a, double c) { return a -= cplx(c); }
inline Jet operator-(double c, const Jet& a) { return cplx(c) - a; }
inline Jet operator*(Jet a, double c) { return a *= cplx(c); }
inline Jet operator*(double c, Jet a) { return a *= cplx(c); }
inline Jet operator/(Jet a, double c) { return a /= cplx(c); }
inline Jet operator/(double c, const Jet& a) { return cplx(c) / a; }

inline Jet sqrt(const Jet& a)
{
    const cplx s = std::sqrt(a.value());
    return a.chain(s, 0.5 / s);
}
inline Jet log(const Jet& a) { return a.chain(std::log(a.value()), 1.0 / a.value()); }
inline Jet exp(const Jet& a)
{
    const cplx e = std::exp(a.value());
    return a.chain(e, e);
}
inline Jet pow(const Jet& a, int n)
{
    if (n == 0) {
        return Jet::constant(1.0, a.dim());
    }
    const cplx p1 = std::pow(a.value(), n - 1);
    return a.chain(p1 * a.value(), static_cast<double>(n) * p1);
}

// Scalar-type helpers so templated formulas read the same for cplx and Jet.
inline cplx value_of(cplx c) { return c; }
inline cplx value_of(const Jet& j) { return j.value(); }

template <class T>
T constant_like(const T& like, cplx c)
{
    if constexpr (std::is_same_v<T, Jet>) {
        return Jet::constant(c, like.dim());
    } else {
        (void)like;
        return c;
    }
}

inline cplx ipow(cplx a, int n) { return n == 0 ? cplx(1.0) : std::pow(a, n); }
inline Jet ipow(const Jet& a, int n) { return pow(a, n); }

// Independent holomorphic (u) and anti-holomorphic (v) coordinate slots.
// Slot 0 is w; slots 1..N-1 are z^1..z^{N-1}.
template <class T>
struct Vars {
    std::vector<T> u;
    std::vector<T> v;

    std::size_t dim() const { return u.size(); }
    std::size_t angular_dim() const { return u.size() - 1; }
    const T& w() const { return u[0]; }
    const T& wbar() const { return v[0]; }
    // alpha is 0-based: z(0) is z^1.
    const T& z(std::size_t alpha) const { return u[alpha + 1]; }
    const T& zbar(std::size_t alpha) const { return v[alpha + 1]; }
};

using Point = Vars<cplx>;

// Seed a jet-valued copy of a complexified point.
inline Vars<Jet> seed_jets(const Point& p)
{
    const std::size_t n = p.dim();
    Vars<Jet> x;
    x.u.reserve(n);
    x.v.reserve(n);
    for (std::size_t a = 0; a < n; ++a) {
        x.u.push_back(Jet::holomorphic_seed(p.u[a], n, a));
    }
    for (std::size_t a = 0; a < n; ++a) {
        x.v.push_back(Jet::antiholomorphic_seed(p.v[a], n, a));
    }
    return x;
}

// (u, v) -> (conj v, conj u); maps the evaluation point of f̄ onto that of f.
inline Point swapped_conjugate(const Point& p)
{
    Point q;
    q.u.resize(p.dim());
    q.v.resize(p.dim());
    for (std::size_t a = 0; a < p.dim(); ++a) {
        q.u[a] = std::conj(p.v[a]);
        q.v[a] = std::conj(p.u[a]);
    }
    return q;
}

} // namespace kcp
