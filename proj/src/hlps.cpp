#include "smt/hlps.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "smt/common.hpp"
#include "smt/quadrature.hpp"

namespace smt {

// ============================================================
// cell averages of |y|^{-beta}
// ============================================================

namespace {

// int over [0,a] x [0,b] of |y|^{-beta}: polar reduction, radial part exact,
// angular part GL16 on an analytic bounded integrand
double corner_rect_weight(double a, double b, double beta) {
    if (!(a > 0.0) || !(b > 0.0)) return 0.0;
    const double e = 2.0 - beta;
    const double phi_ab = std::atan2(b, a);
    const quad::GaussRule& rule = quad::gauss(16);
    const double part1 = quad::gauss_interval(
        rule, 0.0, phi_ab, [&](double phi) { return std::pow(a / std::cos(phi), e); });
    const double part2 = quad::gauss_interval(
        rule, phi_ab, 0.5 * M_PI, [&](double phi) { return std::pow(b / std::sin(phi), e); });
    return (part1 + part2) / e;
}

// signed antiderivative so rectangles straddling the axes reduce to corner
// rectangles by inclusion-exclusion
double signed_corner(double x, double y, double beta) {
    const double s = (x < 0 ? -1.0 : 1.0) * (y < 0 ? -1.0 : 1.0);
    return s * corner_rect_weight(std::fabs(x), std::fabs(y), beta);
}

}  // namespace

double cell_weight_average(double cx, double cy, double h, double beta) {
    if (!(h > 0.0)) throw range_error("cell_weight_average: h must be positive");
    if (!(beta >= 0.0) || beta >= 2.0)
        throw range_error("cell_weight_average: beta must lie in [0, 2)");
    if (beta == 0.0) return 1.0;
    const double x0 = cx - 0.5 * h, x1 = cx + 0.5 * h;
    const double y0 = cy - 0.5 * h, y1 = cy + 0.5 * h;
    const double integral = signed_corner(x1, y1, beta) - signed_corner(x0, y1, beta) -
                            signed_corner(x1, y0, beta) + signed_corner(x0, y0, beta);
    return integral / (h * h);
}

// ============================================================
// restricted Hardy-Littlewood pairing
// ============================================================

PairedBound hl_restricted_pair(const std::vector<double>& f, const std::vector<double>& g,
                               double a, double cell_area) {
    if (f.size() != g.size()) throw range_error("hl_restricted_pair: size mismatch");
    PairedBound r;
    for (std::size_t k = 0; k < f.size(); ++k)
        if (f[k] >= a) r.lhs += f[k] * g[k];
    std::vector<double> fs = f, gs = g;
    std::sort(fs.begin(), fs.end(), std::greater<double>());
    std::sort(gs.begin(), gs.end(), std::greater<double>());
    for (std::size_t k = 0; k < fs.size() && fs[k] >= a; ++k) r.rhs += fs[k] * gs[k];
    r.lhs *= cell_area;
    r.rhs *= cell_area;
    return r;
}

// ============================================================
// P1 distribution function
// ============================================================

namespace {

struct Tri {
    double a, b, c;  // sorted node values
    double area;
    double grad2;  // |grad u|^2 on the triangle
};

// area of {u > t} within the triangle
double tri_area_above(const Tri& T, double t) {
    if (t < T.a) return T.area;
    if (t >= T.c) return 0.0;
    if (t >= T.b) {
        const double D = (T.c - T.a) * (T.c - T.b);
        return D > 0.0 ? T.area * (T.c - t) * (T.c - t) / D : 0.0;
    }
    const double D = (T.b - T.a) * (T.c - T.a);
    return D > 0.0 ? T.area * (1.0 - (t - T.a) * (t - T.a) / D) : T.area;
}

std::vector<Tri> triangulate(const GridFunction& u) {
    if (u.nx < 2 || u.ny < 2 || u.values.size() != std::size_t(u.nx) * u.ny || !(u.h > 0.0))
        throw range_error("GridFunction: need nx, ny >= 2, h > 0 and matching values");
    std::vector<Tri> tris;
    tris.reserve(std::size_t(u.nx - 1) * (u.ny - 1) * 2);
    const double A = 0.5 * u.h * u.h;
    for (int j = 0; j + 1 < u.ny; ++j)
        for (int i = 0; i + 1 < u.nx; ++i) {
            const double u00 = u.values[u.idx(i, j)], u10 = u.values[u.idx(i + 1, j)];
            const double u11 = u.values[u.idx(i + 1, j + 1)], u01 = u.values[u.idx(i, j + 1)];
            const double gx1 = (u10 - u00) / u.h, gy1 = (u11 - u10) / u.h;
            const double gx2 = (u11 - u01) / u.h, gy2 = (u01 - u00) / u.h;
            Tri t1{u00, u10, u11, A, gx1 * gx1 + gy1 * gy1};
            Tri t2{u00, u11, u01, A, gx2 * gx2 + gy2 * gy2};
            for (Tri* t : {&t1, &t2}) {
                if (t->a > t->b) std::swap(t->a, t->b);
                if (t->b > t->c) std::swap(t->b, t->c);
                if (t->a > t->b) std::swap(t->a, t->b);
                tris.push_back(*t);
            }
        }
    return tris;
}

}  // namespace

double PiecewiseQuadratic::operator()(double t) const {
    if (breaks.empty() || t < breaks.front()) return total;
    if (t >= breaks.back()) return 0.0;
    const std::size_t k =
        std::upper_bound(breaks.begin(), breaks.end(), t) - breaks.begin() - 1;
    const auto& c = coeff[k];
    return c[0] + t * (c[1] + t * c[2]);
}

PiecewiseQuadratic p1_distribution(const GridFunction& u) {
    const std::vector<Tri> tris = triangulate(u);
    PiecewiseQuadratic mu;
    mu.breaks.reserve(u.values.size());
    for (double v : u.values) mu.breaks.push_back(v);
    std::sort(mu.breaks.begin(), mu.breaks.end());
    mu.breaks.erase(std::unique(mu.breaks.begin(), mu.breaks.end()), mu.breaks.end());
    const std::size_t m = mu.breaks.empty() ? 0 : mu.breaks.size() - 1;
    // difference arrays per coefficient; prefix sums at the end
    std::vector<std::array<double, 3>> diff(m + 1, {0.0, 0.0, 0.0});
    auto interval_of = [&](double v) -> std::size_t {
        return std::lower_bound(mu.breaks.begin(), mu.breaks.end(), v) - mu.breaks.begin();
    };
    auto add_range = [&](std::size_t lo, std::size_t hi, double c0, double c1, double c2) {
        if (lo >= hi) return;
        diff[lo][0] += c0;
        diff[lo][1] += c1;
        diff[lo][2] += c2;
        diff[hi][0] -= c0;
        diff[hi][1] -= c1;
        diff[hi][2] -= c2;
    };
    for (const Tri& T : tris) {
        mu.total += T.area;
        const std::size_t ia = interval_of(T.a), ib = interval_of(T.b), ic = interval_of(T.c);
        add_range(0, ia, T.area, 0.0, 0.0);
        if (T.b > T.a) {
            const double D = (T.b - T.a) * (T.c - T.a);
            add_range(ia, ib, T.area - T.area * T.a * T.a / D, 2.0 * T.area * T.a / D,
                      -T.area / D);
        }
        if (T.c > T.b) {
            const double D = (T.c - T.a) * (T.c - T.b);
            add_range(ib, ic, T.area * T.c * T.c / D, -2.0 * T.area * T.c / D, T.area / D);
        }
    }
    mu.coeff.assign(m, {0.0, 0.0, 0.0});
    std::array<double, 3> acc{0.0, 0.0, 0.0};
    for (std::size_t k = 0; k < m; ++k) {
        for (int c = 0; c < 3; ++c) acc[c] += diff[k][c];
        mu.coeff[k] = acc;
    }
    return mu;
}

// ============================================================
// restricted Dirichlet energies
// ============================================================

double p1_energy(const GridFunction& u) {
    double e = 0.0;
    for (const Tri& T : triangulate(u)) e += T.grad2 * T.area;
    return e;
}

double p1_energy_above(const GridFunction& u, double t) {
    double e = 0.0;
    for (const Tri& T : triangulate(u)) e += T.grad2 * tri_area_above(T, t);
    return e;
}

double p1_energy_below(const GridFunction& u, double t) {
    double e = 0.0;
    for (const Tri& T : triangulate(u)) e += T.grad2 * (T.area - tri_area_above(T, t));
    return e;
}

namespace {

// int_lo^hi mu / (-mu') dtau for mu = c0 + c1 tau + c2 tau^2 on [lo, hi];
// mu' = c1 + 2 c2 tau < 0 inside every interval where levels are attained,
// so the polynomial-division antiderivative applies
double quadratic_interval_energy(const std::array<double, 3>& c, double lo, double hi) {
    if (!(hi > lo)) return 0.0;
    const double c0 = c[0], c1 = c[1], c2 = c[2];
    if (c2 != 0.0) {
        double r0 = c0 - c1 * c1 / (4.0 * c2);  // mu at the parabola vertex
        // at the interval touching the global max the vertex sits exactly on
        // the endpoint and r0 = 0 in exact arithmetic; roundoff must not pair
        // a stray 1e-15 with log(0)
        const double scale = std::fabs(c0) + std::fabs(c1) * std::max(std::fabs(lo), std::fabs(hi)) +
                             std::fabs(c2) * std::max(lo * lo, hi * hi);
        if (std::fabs(r0) <= 1e-11 * scale) r0 = 0.0;
        auto F = [&](double tau) {
            const double lin = 0.25 * tau * tau + c1 / (4.0 * c2) * tau;
            if (r0 == 0.0) return lin;
            return lin + r0 / (2.0 * c2) * std::log(std::fabs(2.0 * c2 * tau + c1));
        };
        return -(F(hi) - F(lo));
    }
    if (c1 != 0.0) {
        auto F = [&](double tau) { return 0.5 * tau * tau + (c0 / c1) * tau; };
        return -(F(hi) - F(lo));
    }
    // mu constant: either the level range is never attained (mu = 0, no
    // contribution) or the rearrangement has a jump of positive measure,
    // which carries infinite Dirichlet energy
    if (c0 > 0.0) return std::numeric_limits<double>::infinity();
    return 0.0;
}

double rearranged_energy_range(const PiecewiseQuadratic& mu, double lo, double hi) {
    if (mu.breaks.size() < 2) return 0.0;
    lo = std::max(lo, mu.breaks.front());
    hi = std::min(hi, mu.breaks.back());
    double e = 0.0;
    for (std::size_t k = 0; k + 1 < mu.breaks.size(); ++k) {
        const double a = std::max(lo, mu.breaks[k]);
        const double b = std::min(hi, mu.breaks[k + 1]);
        if (b > a) e += quadratic_interval_energy(mu.coeff[k], a, b);
    }
    return 4.0 * M_PI * e;
}

}  // namespace

double rearranged_energy_above(const PiecewiseQuadratic& mu, double t) {
    return rearranged_energy_range(mu, t, std::numeric_limits<double>::infinity());
}

double rearranged_energy_below(const PiecewiseQuadratic& mu, double t) {
    return rearranged_energy_range(mu, -std::numeric_limits<double>::infinity(), t);
}

}  // namespace smt
