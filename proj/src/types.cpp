#include "kcp/types.hpp"

#include <cmath>
#include <sstream>

namespace kcp {

namespace {

bool finite(cplx c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); }

} // namespace

bool KleinPoint::in_domain(cplx w, const std::vector<cplx>& z)
{
    if (!finite(w) || !(w.imag() < 0.0)) {
        return false;
    }
    double s = 0.0;
    for (const auto& c : z) {
        if (!finite(c)) {
            return false;
        }
        s += std::norm(c);
    }
    return s < -2.0 * w.imag();
}

KleinPoint::KleinPoint(cplx w, std::vector<cplx> z) : w_(w), z_(std::move(z))
{
    if (!in_domain(w_, z_)) {
        std::ostringstream os;
        os << "point outside the Klein domain: w = " << w_ << ", sum |z|^2 = " << z_norm2()
           << " (need Im w < 0 and sum |z|^2 < -2 Im w)";
        throw DomainError(os.str());
    }
}

double KleinPoint::z_norm2() const
{
    double s = 0.0;
    for (const auto& c : z_) {
        s += std::norm(c);
    }
    return s;
}

Point KleinPoint::coords() const
{
    Point p;
    p.u.reserve(dimension());
    p.v.reserve(dimension());
    p.u.push_back(w_);
    p.v.push_back(std::conj(w_));
    for (const auto& c : z_) {
        p.u.push_back(c);
    }
    for (const auto& c : z_) {
        p.v.push_back(std::conj(c));
    }
    return p;
}

PoincarePoint::PoincarePoint(std::vector<cplx> z) : z_(std::move(z))
{
    if (z_.empty()) {
        throw DomainError("Poincare point needs at least one coordinate");
    }
    double s = 0.0;
    for (const auto& c : z_) {
        if (!finite(c)) {
            throw DomainError("Poincare point has a non-finite coordinate");
        }
        s += std::norm(c);
    }
    if (!(s < 1.0)) {
        throw DomainError("Poincare point outside the unit ball: sum |z|^2 = " + std::to_string(s));
    }
}

} // namespace kcp
