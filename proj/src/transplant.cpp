#include "smt/transplant.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "smt/common.hpp"
#include "smt/hlps.hpp"
#include "smt/quadrature.hpp"

namespace smt {

// ============================================================
// log-coordinate view of a radial profile
// ============================================================

namespace {

constexpr double kExpClamp = 700.0;

double exp_clamped(double arg, bool* overflow) {
    if (arg > kExpClamp) {
        if (overflow) *overflow = true;
        arg = kExpClamp;
    }
    return std::exp(arg);
}

struct SegView {
    double s_lo, s_hi;  // s = -log r, ascending
    double v_lo, v_hi;
    double slope;
};

// piecewise linear sigma(s) = v(e^{-s}): ramp segments plus the plateau that
// the constant first radial segment becomes
struct SigmaView {
    std::vector<SegView> segs;
    double s_top = 0.0;
    double plateau = 0.0;

    double at(double s) const {
        if (s >= s_top) return plateau;
        for (const SegView& sg : segs)
            if (s <= sg.s_hi) return sg.v_lo + sg.slope * (s - sg.s_lo);
        return plateau;
    }
};

SigmaView make_view(const RadialProfile& v) {
    v.validate();
    if (std::fabs(v.outer_radius() - 1.0) > 1e-12)
        throw domain_error("transplant: the profile must live on the unit ball");
    SigmaView view;
    const std::size_t M = v.grid.size() - 1;
    view.segs.reserve(M - 1);
    for (std::size_t k = M; k >= 2; --k) {
        SegView sg;
        sg.s_lo = k == M ? 0.0 : -std::log(v.grid[k]);
        sg.s_hi = -std::log(v.grid[k - 1]);
        sg.v_lo = v.values[k];
        sg.v_hi = v.values[k - 1];
        sg.slope = (sg.v_hi - sg.v_lo) / (sg.s_hi - sg.s_lo);
        view.segs.push_back(sg);
    }
    view.s_top = view.segs.empty() ? 0.0 : view.segs.back().s_hi;
    view.plateau = v.values[0];
    return view;
}

}  // namespace

// ============================================================
// ball route
// ============================================================

TransplantResult transplant_ball(const RadialProfile& v, const ExponentConfig& cfg,
                                 const BallGreen& g, const GreenLevelData& data, int rays,
                                 par::exec mode) {
    if (cfg.n != g.n || cfg.n != data.n)
        throw domain_error("transplant_ball: dimension mismatch between cfg, g and data");
    if (std::fabs(cfg.beta - data.beta) > 1e-14)
        throw domain_error("transplant_ball: beta of cfg and level data differ");
    if (rays < 8) throw range_error("transplant_ball: need at least 8 rays");

    const SigmaView view = make_view(v);
    const int n = cfg.n;
    const double q = cfg.q();
    const double p = cfg.p();
    const double m = double(n) - cfg.beta;
    const double Ipow = std::pow(g.I(), m);

    TransplantResult res;
    res.I_pow = Ipow;
    res.energy_ball = dirichlet_energy(v, n);
    {
        FunctionalValue fv = functional_eval(v, cfg);
        res.F_ball = fv.value;
        res.overflow = res.overflow || fv.overflow;
    }

    // coarea route: |grad u|^n integrates to q^{n-1} sum |slope|^n int b(s) ds
    const double qn1 = std::pow(q, n - 1);
    for (const SegView& sg : view.segs) {
        if (sg.slope == 0.0) continue;
        const double b_int =
            quad::adaptive(sg.s_lo, sg.s_hi, [&](double s) { return data.b_at(s); }, 1e-13, 1e-12);
        res.energy_coarea += qn1 * std::pow(std::fabs(sg.slope), n) * b_int;
    }

    // direct route: per ray, rho(s) solved pointwise; the scaled quantities
    // X = |grad G| rho and Y = -dG/drho rho stay O(1) at any depth
    const RayFan fan = make_fan(n, rays);
    const quad::GaussRule& rule = quad::gauss(12);
    res.energy_direct = par::block_sum(
        fan.phi.size(), mode,
        [&](std::size_t j) {
            const double phi = fan.phi[j];
            const double ct = std::cos(phi), st = std::sin(phi);
            double acc = 0.0;
            for (const SegView& sg : view.segs) {
                if (sg.slope == 0.0) continue;
                const double coef = qn1 * std::pow(std::fabs(sg.slope), n);
                const int panels = std::max(1, int(std::ceil((sg.s_hi - sg.s_lo) / 1.0)));
                const double hs = (sg.s_hi - sg.s_lo) / panels;
                for (int kp = 0; kp < panels; ++kp) {
                    acc += coef * quad::gauss_interval(
                                      rule, sg.s_lo + kp * hs, sg.s_lo + (kp + 1) * hs,
                                      [&](double s) {
                                          const double rho = level_radius(g, s / q, phi);
                                          double g1, g2;
                                          g.gradient_rel(rho * ct, rho * st, &g1, &g2);
                                          const double X = std::hypot(g1, g2) * rho;
                                          const double Y = -(g1 * ct + g2 * st) * rho;
                                          return std::pow(X, n) / Y;
                                      });
                }
            }
            return acc * fan.weight[j];
        },
        64);

    // weighted functional: F = omega I^m int (e^{alpha sigma^p} - 1) e^{-ms} w(s) ds,
    // the plateau contributes its exact closed form through the volume ratio
    bool ovf = false;
    double Fint = 0.0;
    for (const SegView& sg : view.segs) {
        Fint += quad::adaptive(
            sg.s_lo, sg.s_hi,
            [&](double s) {
                const double sig = sg.v_lo + sg.slope * (s - sg.s_lo);
                const double arg = cfg.alpha * std::pow(std::fabs(sig), p) - m * s;
                return (exp_clamped(arg, &ovf) - std::exp(-m * s)) * data.w_at(s);
            },
            1e-13, 1e-11);
    }
    Fint *= cfg.omega * Ipow;
    const double arg_top = cfg.alpha * std::pow(std::fabs(view.plateau), p) - m * view.s_top;
    const double plateau_term = (exp_clamped(arg_top, &ovf) - std::exp(-m * view.s_top)) *
                                cfg.omega * Ipow / m * data.v_at(view.s_top);
    res.F_domain = Fint + plateau_term;
    res.overflow = res.overflow || ovf;
    return res;
}

// ============================================================
// planar grid route
// ============================================================

PlanarTransplantResult transplant_planar(const RadialProfile& v, const ExponentConfig& cfg,
                                         const PlanarGreen& pg, par::exec mode) {
    if (cfg.n != 2) throw domain_error("transplant_planar: the grid route is planar (n = 2)");
    v.validate();
    if (std::fabs(v.outer_radius() - 1.0) > 1e-12)
        throw domain_error("transplant_planar: the profile must live on the unit ball");

    const PlanarDomain& dom = pg.dom;
    const double q = cfg.q();
    const double p = cfg.p();

    PlanarTransplantResult res;
    res.I = pg.I;
    res.energy_ball = dirichlet_energy(v, 2);
    {
        FunctionalValue fv = functional_eval(v, cfg);
        res.F_ball = fv.value;
        res.overflow = res.overflow || fv.overflow;
    }

    // nodal transplant; exterior nodes have G = 0, hence u = v(1) = 0
    std::vector<double> u(std::size_t(dom.nx) * dom.ny, 0.0);
    par::for_index(u.size(), mode, [&](std::size_t id) {
        if (pg.Gfull[id] > 0.0) u[id] = v.value_at(std::exp(-q * pg.Gfull[id]));
    });

    // 5-point energy: at n = 2 the h factors cancel edge by edge
    const std::size_t x_edges = std::size_t(dom.nx - 1) * dom.ny;
    res.energy_grid = par::block_sum(x_edges, mode, [&](std::size_t e) {
        const int i = int(e % (dom.nx - 1)), j = int(e / (dom.nx - 1));
        const double d = u[dom.idx(i + 1, j)] - u[dom.idx(i, j)];
        return d * d;
    });
    const std::size_t y_edges = std::size_t(dom.nx) * (dom.ny - 1);
    res.energy_grid += par::block_sum(y_edges, mode, [&](std::size_t e) {
        const int i = int(e % dom.nx), j = int(e / dom.nx);
        const double d = u[dom.idx(i, j + 1)] - u[dom.idx(i, j)];
        return d * d;
    });

    // cell-averaged weighted functional
    bool ovf = false;
    const std::size_t cells = std::size_t(dom.nx - 1) * (dom.ny - 1);
    std::vector<std::uint8_t> cell_ovf(cells, 0);
    res.F_grid = par::block_sum(cells, mode, [&](std::size_t cidx) {
        const int i = int(cidx % (dom.nx - 1)), j = int(cidx / (dom.nx - 1));
        const double ubar = 0.25 * (u[dom.idx(i, j)] + u[dom.idx(i + 1, j)] +
                                    u[dom.idx(i, j + 1)] + u[dom.idx(i + 1, j + 1)]);
        if (ubar <= 0.0) return 0.0;
        bool local_ovf = false;
        const double e = exp_clamped(cfg.alpha * std::pow(ubar, p), &local_ovf) - 1.0;
        if (local_ovf) cell_ovf[cidx] = 1;
        const double w = cfg.beta == 0.0
                             ? 1.0
                             : cell_weight_average(dom.x_of(i) + 0.5 * dom.h - dom.px,
                                                   dom.y_of(j) + 0.5 * dom.h - dom.py, dom.h,
                                                   cfg.beta);
        return e * w * dom.h * dom.h;
    });
    for (std::uint8_t f : cell_ovf) ovf = ovf || (f != 0);
    res.overflow = res.overflow || ovf;
    return res;
}

// ============================================================
// outside mass of a transplanted profile
// ============================================================

OutsideMass transplant_outside_mass(const RadialProfile& v, const BallGreen& g,
                                    const GreenLevelData& data, double delta, int rays) {
    if (!(delta > 0.0)) throw range_error("transplant_outside_mass: delta must be positive");
    const SigmaView view = make_view(v);
    const int n = g.n;
    const double q = g.q();

    OutsideMass out;
    const RayFan fan = make_fan(n, rays);
    double t_max = -1e300;
    auto probe = [&](double phi) {
        t_max = std::max(t_max, g.value_rel(delta * std::cos(phi), delta * std::sin(phi)));
    };
    for (double phi : fan.phi) probe(phi);
    probe(0.0);
    probe(M_PI);
    out.t_max = t_max;

    const double s_band = q * std::max(t_max, 0.0);
    double sup = view.at(0.0);
    const double qn1 = std::pow(q, n - 1);
    for (const SegView& sg : view.segs) {
        if (sg.s_lo >= s_band) break;
        const double hi = std::min(sg.s_hi, s_band);
        sup = std::max(sup, std::max(view.at(sg.s_lo), view.at(hi)));
        if (sg.slope != 0.0) {
            const double b_int =
                quad::adaptive(sg.s_lo, hi, [&](double s) { return data.b_at(s); }, 1e-13, 1e-12);
            out.energy_outside += qn1 * std::pow(std::fabs(sg.slope), n) * b_int;
        }
    }
    if (s_band >= view.s_top) sup = std::max(sup, view.plateau);
    out.sup_outside = sup;
    return out;
}

}  // namespace smt
