#include "kcp/field.hpp"

#include <algorithm>
#include <cmath>

namespace kcp {

ScalarField conjugate(const ScalarField& f)
{
    return ScalarField{
        "conj(" + f.label + ")",
        [f](const Point& p) { return std::conj(f.value(swapped_conjugate(p))); },
        [f](const Point& p) { return f.jet(swapped_conjugate(p)).swapped_conjugate(); },
    };
}

ScalarField product(const ScalarField& a, const ScalarField& b)
{
    return ScalarField{
        a.label + "*" + b.label,
        [a, b](const Point& p) { return a.value(p) * b.value(p); },
        [a, b](const Point& p) { return a.jet(p) * b.jet(p); },
    };
}

ScalarField add_scaled(const ScalarField& a, cplx c, const ScalarField& b)
{
    return ScalarField{
        a.label + "+c*" + b.label,
        [a, b, c](const Point& p) { return a.value(p) + c * b.value(p); },
        [a, b, c](const Point& p) { return a.jet(p) + c * b.jet(p); },
    };
}

namespace {

cplx central(const ScalarField& f, Point p, bool holomorphic, std::size_t slot, double h)
{
    auto& x = holomorphic ? p.u[slot] : p.v[slot];
    const cplx x0 = x;
    x = x0 + h;
    const cplx fp = f.value(p);
    x = x0 - h;
    const cplx fm = f.value(p);
    return (fp - fm) / (2.0 * h);
}

} // namespace

std::pair<std::vector<cplx>, std::vector<cplx>> fd_gradient(const ScalarField& f, const Point& p,
                                                            double rel_step)
{
    const std::size_t n = p.dim();
    std::vector<cplx> gu(n), gv(n);
    for (int side = 0; side < 2; ++side) {
        const bool hol = side == 0;
        for (std::size_t a = 0; a < n; ++a) {
            const double scale = std::max(1.0, std::abs(hol ? p.u[a] : p.v[a]));
            const double h = rel_step * scale;
            const cplx d1 = central(f, p, hol, a, h);
            const cplx d2 = central(f, p, hol, a, 0.5 * h);
            (hol ? gu : gv)[a] = (4.0 * d2 - d1) / 3.0;
        }
    }
    return {gu, gv};
}

} // namespace kcp
