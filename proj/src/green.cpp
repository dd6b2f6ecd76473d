#include "smt/green.hpp"

#include <algorithm>
#include <cmath>

#include "smt/quadrature.hpp"

namespace smt {

// ---------------------------------------------------------------------------
// closed form
// ---------------------------------------------------------------------------

double BallGreen::q() const { return std::pow(sphere_measure(n), 1.0 / double(n - 1)); }

// The regular factor |x0||y - x0*| is evaluated as sqrt((d p1 - (R^2-d^2))^2
// + (d p2)^2) with p = y - pole, which stays finite and smooth through d = 0
// and loses nothing when |p| is tiny against d.
double BallGreen::value_rel(double p1, double p2) const {
    double cc = c();
    double u1 = d * p1 - (R * R - d * d), u2 = d * p2;
    return -0.5 * cc * std::log(p1 * p1 + p2 * p2) +
           0.5 * cc * std::log((u1 * u1 + u2 * u2) / (R * R));
}

void BallGreen::gradient_rel(double p1, double p2, double* g1, double* g2) const {
    double cc = c();
    double pp = p1 * p1 + p2 * p2;
    double u1 = d * p1 - (R * R - d * d), u2 = d * p2;
    double uu = u1 * u1 + u2 * u2;
    *g1 = -cc * p1 / pp + cc * d * u1 / uu;
    *g2 = -cc * p2 / pp + cc * d * u2 / uu;
}

double BallGreen::value(double y1, double y2) const { return value_rel(y1 - d, y2); }

void BallGreen::gradient(double y1, double y2, double* g1, double* g2) const {
    gradient_rel(y1 - d, y2, g1, g2);
}

BallGreen make_ball_green(int n, double R, double pole_offset) {
    if (n < 2) throw range_error("make_ball_green: n must be >= 2");
    if (!(R > 0.0)) throw range_error("make_ball_green: R must be positive");
    if (!(pole_offset >= 0.0) || !(pole_offset < R))
        throw domain_error("make_ball_green: pole must sit strictly inside the ball");
    BallGreen g;
    g.n = n;
    g.R = R;
    g.d = pole_offset;
    return g;
}

// ---------------------------------------------------------------------------
// fans and ray solves
// ---------------------------------------------------------------------------

RayFan make_fan(int n, int rays) {
    if (rays < 4) throw range_error("make_fan: need at least 4 rays");
    RayFan fan;
    fan.phi.reserve(static_cast<std::size_t>(rays));
    fan.weight.reserve(static_cast<std::size_t>(rays));
    if (n == 2) {
        double w = 2.0 * M_PI / double(rays);
        for (int j = 0; j < rays; ++j) {
            fan.phi.push_back(w * (double(j) + 0.5));
            fan.weight.push_back(w);
        }
        return fan;
    }
    const quad::GaussRule& rule = quad::gauss(rays);
    double omega_sub = sphere_measure(n - 1);
    double expo = 0.5 * double(n - 3);
    for (int j = 0; j < rays; ++j) {
        double mu = rule.x[static_cast<std::size_t>(j)];
        double fac = expo == 0.0 ? 1.0 : std::pow(1.0 - mu * mu, expo);
        fan.phi.push_back(std::acos(mu));
        fan.weight.push_back(omega_sub * rule.w[static_cast<std::size_t>(j)] * fac);
    }
    return fan;
}

double boundary_radius(const BallGreen& g, double phi) {
    double xd = g.d * std::cos(phi);
    return -xd + std::sqrt(g.R * g.R - g.d * g.d + xd * xd);
}

namespace {

struct RayPoint {
    double rho, G, dG_drho, dG_dperp;  // gradient in the ray frame
};

RayPoint eval_on_ray(const BallGreen& g, double phi, double rho) {
    double ct = std::cos(phi), st = std::sin(phi);
    RayPoint out;
    out.rho = rho;
    out.G = g.value_rel(rho * ct, rho * st);
    double g1, g2;
    g.gradient_rel(rho * ct, rho * st, &g1, &g2);
    out.dG_drho = g1 * ct + g2 * st;
    out.dG_dperp = -g1 * st + g2 * ct;
    return out;
}

}  // namespace

double level_radius(const BallGreen& g, double t, double phi) {
    if (t < 0.0) throw range_error("level_radius: t must be >= 0");
    double rho_b = boundary_radius(g, phi);
    if (t == 0.0) return rho_b;

    // solve G = t in s = -log rho; G is increasing in s along the ray
    double s_lo = -std::log(rho_b);
    double s = std::max(g.q() * t - std::log(g.I()), s_lo);
    double s_hi = s + 0.5;
    double step = 1.0;
    for (int k = 0; k < 200; ++k) {
        if (eval_on_ray(g, phi, std::exp(-s_hi)).G > t) break;
        s_hi += step;
        step *= 2.0;
    }
    s = std::clamp(s, s_lo, s_hi);
    for (int it = 0; it < 100; ++it) {
        RayPoint pt = eval_on_ray(g, phi, std::exp(-s));
        double resid = pt.G - t;
        if (resid > 0.0)
            s_hi = std::min(s_hi, s);
        else
            s_lo = std::max(s_lo, s);
        double slope = -pt.rho * pt.dG_drho;  // dG/ds > 0
        double s_next = slope > 0.0 ? s - resid / slope : 0.5 * (s_lo + s_hi);
        if (!(s_next > s_lo && s_next < s_hi)) s_next = 0.5 * (s_lo + s_hi);
        double move = std::abs(s_next - s);
        s = s_next;
        if (move <= 1e-15 * std::max(1.0, std::abs(s))) break;
    }
    return std::exp(-s);
}

double level_radius_derivative(const BallGreen& g, double t, double phi, double rho) {
    (void)t;
    RayPoint pt = eval_on_ray(g, phi, rho);
    if (pt.dG_drho == 0.0) throw domain_error("level_radius_derivative: tangential level set");
    return -rho * pt.dG_dperp / pt.dG_drho;
}

// ---------------------------------------------------------------------------
// level-set functionals
// ---------------------------------------------------------------------------

double sublevel_flow_integral(const BallGreen& g, double t, const RayFan& fan, par::exec mode) {
    if (t < 0.0) throw range_error("sublevel_flow_integral: t must be >= 0");
    int n = g.n;
    return par::block_sum(
        fan.phi.size(), mode,
        [&](std::size_t j) {
            double phi = fan.phi[j];
            double s_b = -std::log(boundary_radius(g, phi));
            double s_t = -std::log(level_radius(g, t, phi));
            if (!(s_t > s_b)) return 0.0;
            double val = quad::adaptive(
                s_b, s_t,
                [&](double s) {
                    RayPoint pt = eval_on_ray(g, phi, std::exp(-s));
                    double gn = std::hypot(pt.dG_drho, pt.dG_dperp);
                    return std::pow(gn, n) * std::exp(-double(n) * s);
                },
                1e-15, 1e-13);
            return fan.weight[j] * val;
        },
        64);
}

double level_surface_integral(const BallGreen& g, double t, double beta, double pw,
                              const RayFan& fan, par::exec mode) {
    int n = g.n;
    return par::block_sum(
        fan.phi.size(), mode,
        [&](std::size_t j) {
            double phi = fan.phi[j];
            double rho = level_radius(g, t, phi);
            RayPoint pt = eval_on_ray(g, phi, rho);
            double gn = std::hypot(pt.dG_drho, pt.dG_dperp);
            double drho = pt.dG_drho == 0.0 ? 0.0 : -rho * pt.dG_dperp / pt.dG_drho;
            double line = std::sqrt(rho * rho + drho * drho);
            double fac = n == 2 ? 1.0 : std::pow(rho, n - 2);
            return fan.weight[j] * fac * line * std::pow(rho, -beta) * std::pow(gn, pw);
        },
        64);
}

double superlevel_volume(const BallGreen& g, double t, const RayFan& fan, par::exec mode) {
    int n = g.n;
    return par::block_sum(
        fan.phi.size(), mode,
        [&](std::size_t j) {
            double rho = level_radius(g, t, fan.phi[j]);
            return fan.weight[j] * std::pow(rho, n) / double(n);
        },
        64);
}

double superlevel_weighted_volume(const BallGreen& g, double beta, double t, const RayFan& fan,
                                  par::exec mode) {
    double m = double(g.n) - beta;
    if (!(m > 0.0)) throw range_error("superlevel_weighted_volume: beta must be < n");
    return par::block_sum(
        fan.phi.size(), mode,
        [&](std::size_t j) {
            double rho = level_radius(g, t, fan.phi[j]);
            return fan.weight[j] * std::pow(rho, m) / m;
        },
        64);
}

LevelEnclosure level_enclosure(const BallGreen& g, double t, const RayFan& fan) {
    LevelEnclosure enc;
    enc.t = t;
    enc.tau = g.I() * std::exp(-g.q() * t);
    double dev = 0.0;
    for (double phi : fan.phi)
        dev = std::max(dev, std::abs(level_radius(g, t, phi) - enc.tau));
    enc.sigma = dev * (1.0 + 1e-6) + enc.tau * 1e-15;
    if (!(enc.sigma < enc.tau))
        throw certificate_error(strf("level_enclosure: sigma %g not below tau %g at t = %g",
                                     enc.sigma, enc.tau, t));
    return enc;
}

// ---------------------------------------------------------------------------
// cached level data
// ---------------------------------------------------------------------------

GreenLevelData make_level_data(const BallGreen& g, double beta, int rays, int s_nodes,
                               double s_cap, par::exec mode) {
    if (s_nodes < 8) throw range_error("make_level_data: need more s nodes");
    if (!(beta >= 0.0 && beta < double(g.n)))
        throw range_error("make_level_data: beta must lie in [0, n)");
    GreenLevelData data;
    data.n = g.n;
    data.beta = beta;
    data.I = g.I();
    data.q = g.q();
    data.omega = sphere_measure(g.n);
    data.s_cap = s_cap;

    const RayFan fan = make_fan(g.n, rays);
    const double m = double(g.n) - beta;
    const int n = g.n;
    std::vector<double> sx(static_cast<std::size_t>(s_nodes));
    std::vector<double> wv(sx.size()), vv(sx.size()), bv(sx.size()), volv(sx.size());

    par::for_index(sx.size(), mode, [&](std::size_t i) {
        double s = s_cap * double(i) / double(s_nodes - 1);
        double t = s / data.q;
        double acc_w = 0.0, acc_v = 0.0, acc_b = 0.0, acc_vol = 0.0;
        for (std::size_t j = 0; j < fan.phi.size(); ++j) {
            double phi = fan.phi[j];
            double rho = level_radius(g, t, phi);
            RayPoint pt = eval_on_ray(g, phi, rho);
            double gn = std::hypot(pt.dG_drho, pt.dG_dperp);
            double drho = -rho * pt.dG_dperp / pt.dG_drho;
            double line = std::sqrt(rho * rho + drho * drho);
            double fac = n == 2 ? 1.0 : std::pow(rho, n - 2);
            acc_w += fan.weight[j] * fac * line * std::pow(rho, -beta) / gn;
            acc_b += fan.weight[j] * fac * line * std::pow(gn, n - 1);
            acc_v += fan.weight[j] * std::pow(rho, m) / m;
            acc_vol += fan.weight[j] * std::pow(rho, n) / double(n);
        }
        sx[i] = s;
        wv[i] = acc_w * std::exp(m * s) / (data.q * data.omega * std::pow(data.I, m));
        bv[i] = acc_b;
        vv[i] = acc_v * m * std::exp(m * s) / (data.omega * std::pow(data.I, m));
        volv[i] = acc_vol * double(n) * std::exp(double(n) * s) / (data.omega * std::pow(data.I, n));
    });

    data.w_ratio = make_spline(sx, wv);
    data.v_ratio = make_spline(sx, vv);
    data.b_ratio = make_spline(sx, bv);
    data.vol_ratio = make_spline(std::move(sx), std::move(volv));
    return data;
}

double GreenLevelData::volume_of_s(double s) const {
    return omega / double(n) * std::pow(I, n) * std::exp(-double(n) * s) *
           vol_ratio(std::min(s, s_cap));
}

// ---------------------------------------------------------------------------
// polygons
// ---------------------------------------------------------------------------

namespace {

double edge_weight_integral(const std::array<double, 2>& a, const std::array<double, 2>& b,
                            double expo) {
    if (expo == 0.0) return 1.0;
    auto f = [&](double t) {
        double y1 = a[0] + t * (b[0] - a[0]);
        double y2 = a[1] + t * (b[1] - a[1]);
        double rr = y1 * y1 + y2 * y2;
        if (rr <= 0.0) throw domain_error("polygon weight: edge passes through the origin");
        return std::pow(rr, -0.5 * expo);
    };
    return quad::adaptive(0.0, 1.0, f, 1e-14, 1e-12);
}

}  // namespace

double polygon_weighted_area(const Polygon& poly, double beta) {
    if (poly.pts.size() < 3) throw range_error("polygon_weighted_area: need >= 3 vertices");
    if (!(beta >= 0.0 && beta < 2.0))
        throw range_error("polygon_weighted_area: beta must lie in [0, 2)");
    double total = 0.0;
    for (std::size_t k = 0; k < poly.pts.size(); ++k) {
        const auto& a = poly.pts[k];
        const auto& b = poly.pts[(k + 1) % poly.pts.size()];
        double cross = a[0] * b[1] - a[1] * b[0];
        if (cross == 0.0) continue;
        total += cross / (2.0 - beta) * edge_weight_integral(a, b, beta);
    }
    return total;
}

double polygon_weighted_perimeter(const Polygon& poly, double e) {
    if (poly.pts.size() < 3) throw range_error("polygon_weighted_perimeter: need >= 3 vertices");
    double total = 0.0;
    for (std::size_t k = 0; k < poly.pts.size(); ++k) {
        const auto& a = poly.pts[k];
        const auto& b = poly.pts[(k + 1) % poly.pts.size()];
        double len = std::hypot(b[0] - a[0], b[1] - a[1]);
        total += len * edge_weight_integral(a, b, e);
    }
    return total;
}

double alvino_area_bound(double weighted_perimeter, int n, double beta) {
    if (!(weighted_perimeter >= 0.0))
        throw range_error("alvino_area_bound: perimeter integral must be >= 0");
    double p = double(n) / double(n - 1);
    return std::pow(weighted_perimeter, p) / critical_alpha_for(n, beta);
}

}  // namespace smt
