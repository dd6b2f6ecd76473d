#include "smt/radial.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "smt/quadrature.hpp"

namespace smt {

namespace {

constexpr double kExpClamp = 700.0;

double clamped_exp(double arg, bool* clamped) {
    if (arg > kExpClamp) {
        if (clamped) *clamped = true;
        arg = kExpClamp;
    }
    return std::exp(arg);
}

}  // namespace

// ---------------------------------------------------------------------------
// RadialProfile basics
// ---------------------------------------------------------------------------

void RadialProfile::validate() const {
    if (grid.size() != values.size())
        throw range_error("RadialProfile: grid/values size mismatch");
    if (grid.size() < 2) throw range_error("RadialProfile: need at least 2 nodes");
    if (grid.front() != 0.0) throw range_error("RadialProfile: grid must start at r = 0");
    for (std::size_t k = 0; k + 1 < grid.size(); ++k)
        if (!(grid[k] < grid[k + 1]))
            throw range_error(strf("RadialProfile: grid not strictly increasing at node %zu", k));
    for (double v : values)
        if (!std::isfinite(v)) throw range_error("RadialProfile: non-finite value");
}

double RadialProfile::value_at(double r) const {
    if (r < 0.0 || r > grid.back() * (1.0 + 1e-12))
        throw range_error(strf("value_at: r = %g outside [0, %g]", r, grid.back()));
    if (r <= grid[1]) {
        if (r == grid[1]) return values[1];
        return values[0];
    }
    auto it = std::upper_bound(grid.begin(), grid.end(), r);
    std::size_t k = static_cast<std::size_t>(it - grid.begin());
    if (k >= grid.size()) return values.back();
    // r in (grid[k-1], grid[k]]
    double lr0 = std::log(grid[k - 1]);
    double lr1 = std::log(grid[k]);
    double lam = (std::log(r) - lr0) / (lr1 - lr0);
    return values[k - 1] + lam * (values[k] - values[k - 1]);
}

double RadialProfile::max_value() const {
    return *std::max_element(values.begin(), values.end());
}

bool RadialProfile::non_increasing(double slack) const {
    for (std::size_t k = 0; k + 1 < values.size(); ++k)
        if (values[k + 1] > values[k] + slack) return false;
    return true;
}

std::vector<double> log_grid(int nodes, double s_max, double R) {
    if (nodes < 3) throw range_error("log_grid: need at least 3 nodes");
    if (!(s_max > 0.0) || !(R > 0.0)) throw range_error("log_grid: s_max and R must be positive");
    std::vector<double> g(static_cast<std::size_t>(nodes));
    g[0] = 0.0;
    int m = nodes - 1;  // log-spaced nodes e^{-s_max} .. 1 (times R)
    for (int j = 0; j < m; ++j) {
        double s = s_max * double(m - 1 - j) / double(m - 1);
        g[static_cast<std::size_t>(j) + 1] = R * std::exp(-s);
    }
    g.back() = R;
    return g;
}

std::vector<double> uniform_grid(int nodes, double R) {
    if (nodes < 3) throw range_error("uniform_grid: need at least 3 nodes");
    std::vector<double> g(static_cast<std::size_t>(nodes));
    for (int j = 0; j < nodes; ++j) g[static_cast<std::size_t>(j)] = R * double(j) / double(nodes - 1);
    return g;
}

RadialProfile sample_profile(const std::vector<double>& grid,
                             const std::function<double(double)>& u_of_r) {
    RadialProfile u;
    u.grid = grid;
    u.values.reserve(grid.size());
    for (double r : grid) u.values.push_back(u_of_r(r));
    u.validate();
    return u;
}

// ---------------------------------------------------------------------------
// energies
// ---------------------------------------------------------------------------

double dirichlet_energy(const RadialProfile& u, int n) {
    u.validate();
    if (n < 2) throw range_error("dirichlet_energy: n must be >= 2");
    double omega = sphere_measure(n);
    double e = 0.0;
    for (std::size_t k = 1; k + 1 < u.grid.size(); ++k) {
        double ds = std::log(u.grid[k + 1] / u.grid[k]);
        double du = std::abs(u.values[k + 1] - u.values[k]);
        if (du == 0.0) continue;
        e += std::pow(du, n) / std::pow(ds, n - 1);
    }
    return omega * e;
}

double dirichlet_energy_annulus(const RadialProfile& u, int n, double r_lo, double r_hi) {
    u.validate();
    if (n < 2) throw range_error("dirichlet_energy_annulus: n must be >= 2");
    if (r_lo < 0.0 || r_hi > u.grid.back() * (1.0 + 1e-12) || r_lo > r_hi)
        throw range_error("dirichlet_energy_annulus: bad radius window");
    double omega = sphere_measure(n);
    double e = 0.0;
    for (std::size_t k = 1; k + 1 < u.grid.size(); ++k) {
        double a = std::max(u.grid[k], r_lo);
        double b = std::min(u.grid[k + 1], r_hi);
        if (!(a < b)) continue;
        double ds_full = std::log(u.grid[k + 1] / u.grid[k]);
        double frac = std::log(b / a) / ds_full;
        double du = std::abs(u.values[k + 1] - u.values[k]);
        if (du == 0.0) continue;
        e += frac * std::pow(du, n) / std::pow(ds_full, n - 1);
    }
    return omega * e;
}

double dirichlet_energy_restricted(const RadialProfile& u, int n, double level, bool above) {
    u.validate();
    if (n < 2) throw range_error("dirichlet_energy_restricted: n must be >= 2");
    double omega = sphere_measure(n);
    double e = 0.0;
    for (std::size_t k = 1; k + 1 < u.grid.size(); ++k) {
        double u0 = u.values[k], u1 = u.values[k + 1];
        double du = u1 - u0;
        if (du == 0.0) continue;
        // fraction of the segment (in lambda) lying on the requested side
        double frac;
        bool lo_in = above ? (u0 >= level) : (u0 <= level);
        bool hi_in = above ? (u1 >= level) : (u1 <= level);
        if (lo_in && hi_in) {
            frac = 1.0;
        } else if (!lo_in && !hi_in) {
            continue;
        } else {
            double lam = (level - u0) / du;  // crossing point in [0,1]
            lam = std::clamp(lam, 0.0, 1.0);
            frac = lo_in ? lam : 1.0 - lam;
        }
        double ds_full = std::log(u.grid[k + 1] / u.grid[k]);
        e += frac * std::pow(std::abs(du), n) / std::pow(ds_full, n - 1);
    }
    return omega * e;
}

// ---------------------------------------------------------------------------
// functional
// ---------------------------------------------------------------------------

namespace {

// integrand of the weighted functional in s = -log r, with the weight folded
// into the exponent: (e^{alpha|u|^p} - 1) r^{n-beta-1} dr = f(s) ds,
// f(s) = e^{alpha|u(s)|^p - m s} - e^{-m s}, m = n - beta
struct SegIntegrand {
    double alpha, p, m;
    double s_lo, s_hi, u_at_lo, u_at_hi;
    bool* overflow;

    double operator()(double s) const {
        double lam = (s - s_lo) / (s_hi - s_lo);
        double uu = u_at_lo + lam * (u_at_hi - u_at_lo);
        double a = alpha * std::pow(std::abs(uu), p) - m * s;
        return clamped_exp(a, overflow) - std::exp(-m * s);
    }
};

// closed-form plateau contribution (constant value u0) over [r_a, r_b]:
// (e^{alpha|u0|^p} - 1)(r_b^m - r_a^m)/m evaluated in log space; r_a == 0 ok
double plateau_closed_form(double u0, double r_a, double r_b, const ExponentConfig& cfg,
                           bool* overflow) {
    double m = double(cfg.n) - cfg.beta;
    double A = cfg.alpha * std::pow(std::abs(u0), cfg.p());
    auto endpoint = [&](double r) -> double {
        if (r <= 0.0) return 0.0;
        double s = -std::log(r);
        return clamped_exp(A - m * s, overflow) - std::exp(-m * s);
    };
    return (endpoint(r_b) - endpoint(r_a)) / m;
}

FunctionalValue functional_window(const RadialProfile& u, const ExponentConfig& cfg, double r_lo,
                                  double r_hi, double level, int mode, const QuadOptions& opts) {
    // mode 0: annulus [r_lo, r_hi]; mode +1: {u >= level}; mode -1: {u <= level}
    u.validate();
    FunctionalValue out;
    double m = double(cfg.n) - cfg.beta;
    double p = cfg.p();

    // plateau segment [0, grid[1]]
    {
        double a = std::max(0.0, r_lo);
        double b = std::min(u.grid[1], r_hi);
        bool in = true;
        if (mode == 1) in = u.values[0] >= level;
        if (mode == -1) in = u.values[0] <= level;
        if (in && a < b)
            out.value += plateau_closed_form(u.values[0], a, b, cfg, &out.overflow);
    }

    for (std::size_t k = 1; k + 1 < u.grid.size(); ++k) {
        double r0 = std::max(u.grid[k], r_lo);
        double r1 = std::min(u.grid[k + 1], r_hi);
        if (!(r0 < r1)) continue;
        double lr_a = std::log(u.grid[k]);
        double lr_b = std::log(u.grid[k + 1]);
        double u0 = u.values[k], u1 = u.values[k + 1];
        auto u_at = [&](double r) {
            double lam = (std::log(r) - lr_a) / (lr_b - lr_a);
            return u0 + lam * (u1 - u0);
        };
        // clip by the level restriction (u is monotone per segment)
        if (mode != 0) {
            double ua = u_at(r0), ub = u_at(r1);
            bool a_in = mode == 1 ? (ua >= level) : (ua <= level);
            bool b_in = mode == 1 ? (ub >= level) : (ub <= level);
            if (!a_in && !b_in) continue;
            if (a_in != b_in && ua != ub) {
                double lam = (level - u0) / (u1 - u0);
                double r_cross = std::exp(lr_a + lam * (lr_b - lr_a));
                r_cross = std::clamp(r_cross, u.grid[k], u.grid[k + 1]);
                if (a_in)
                    r1 = std::min(r1, r_cross);
                else
                    r0 = std::max(r0, r_cross);
            }
            if (!(r0 < r1)) continue;
        }
        double s_lo = -std::log(r1);
        double s_hi = -std::log(r0);
        if (u0 == u1) {
            out.value += plateau_closed_form(u0, r0, r1, cfg, &out.overflow);
            continue;
        }
        SegIntegrand f{cfg.alpha, p, m, s_lo, s_hi, u_at(r1), u_at(r0), &out.overflow};
        out.value += quad::adaptive(s_lo, s_hi, f, opts.abs_tol, opts.rel_tol);
    }
    out.value *= cfg.omega;
    return out;
}

}  // namespace

FunctionalValue functional_eval(const RadialProfile& u, const ExponentConfig& cfg,
                                const QuadOptions& opts) {
    return functional_window(u, cfg, 0.0, u.grid.back(), 0.0, 0, opts);
}

FunctionalValue functional_eval_annulus(const RadialProfile& u, const ExponentConfig& cfg,
                                        double r_lo, double r_hi, const QuadOptions& opts) {
    if (r_lo < 0.0 || r_lo > r_hi) throw range_error("functional_eval_annulus: bad window");
    return functional_window(u, cfg, r_lo, std::min(r_hi, u.grid.back()), 0.0, 0, opts);
}

FunctionalValue functional_eval_restricted(const RadialProfile& u, const ExponentConfig& cfg,
                                           double level, bool above, const QuadOptions& opts) {
    return functional_window(u, cfg, 0.0, u.grid.back(), level, above ? 1 : -1, opts);
}

// ---------------------------------------------------------------------------
// transforms
// ---------------------------------------------------------------------------

RadialProfile transform_Ta(const RadialProfile& u, double a, int n) {
    u.validate();
    if (!(a > 0.0)) throw range_error("transform_Ta: a must be positive");
    if (n < 2) throw range_error("transform_Ta: n must be >= 2");
    RadialProfile v;
    v.grid.reserve(u.grid.size());
    v.values.reserve(u.values.size());
    double scale = std::pow(a, double(n - 1) / double(n));
    for (std::size_t k = 0; k < u.grid.size(); ++k) {
        v.grid.push_back(std::pow(u.grid[k], a));
        v.values.push_back(scale * u.values[k]);
    }
    v.grid.front() = 0.0;
    v.validate();
    return v;
}

RadialProfile log_ramp_profile(double height, double r_in, double r_out, double R,
                               int ramp_nodes, int tail_nodes) {
    if (!(0.0 < r_in && r_in < r_out && r_out <= R))
        throw range_error("log_ramp_profile: need 0 < r_in < r_out <= R");
    if (ramp_nodes < 1 || tail_nodes < 1) throw range_error("log_ramp_profile: bad node counts");
    RadialProfile u;
    u.grid.push_back(0.0);
    u.values.push_back(height);
    u.grid.push_back(r_in);
    u.values.push_back(height);
    double s_in = -std::log(r_in), s_out = -std::log(r_out);
    for (int j = 1; j < ramp_nodes; ++j) {
        double s = s_in + (s_out - s_in) * double(j) / double(ramp_nodes);
        u.grid.push_back(std::exp(-s));
        u.values.push_back(height * (s - s_out) / (s_in - s_out));
    }
    u.grid.push_back(r_out);
    u.values.push_back(0.0);
    if (r_out < R) {
        double s_R = -std::log(R);
        for (int j = 1; j < tail_nodes; ++j) {
            double s = s_out + (s_R - s_out) * double(j) / double(tail_nodes);
            u.grid.push_back(std::exp(-s));
            u.values.push_back(0.0);
        }
        u.grid.push_back(R);
        u.values.push_back(0.0);
    }
    u.validate();
    return u;
}

RadialProfile moser_profile(int i, double eps, int n, int ramp_nodes, int tail_nodes) {
    if (i < 1) throw range_error("moser_profile: index i must be >= 1");
    if (!(eps > 0.0 && eps <= 1.0)) throw range_error("moser_profile: eps must be in (0, 1]");
    if (n < 2) throw range_error("moser_profile: n must be >= 2");
    double omega = sphere_measure(n);
    double q = std::pow(omega, 1.0 / double(n - 1));
    double p = double(n) / double(n - 1);
    double r_in = eps * std::exp(-q * std::pow(double(i), p));
    return log_ramp_profile(double(i), r_in, eps, 1.0, ramp_nodes, tail_nodes);
}

// ---------------------------------------------------------------------------
// rearrangement
// ---------------------------------------------------------------------------

namespace {

// measure of {u > t} (or {u >= t}) under the volume structure vol(r)
double measure_above_impl(const RadialProfile& u, const std::function<double(double)>& vol,
                          double t, bool strict) {
    double meas = 0.0;
    auto in = [&](double val) { return strict ? val > t : val >= t; };
    // plateau [0, grid[1]]
    if (in(u.values[0])) meas += vol(u.grid[1]);
    for (std::size_t k = 1; k + 1 < u.grid.size(); ++k) {
        double u0 = u.values[k], u1 = u.values[k + 1];
        double r0 = u.grid[k], r1 = u.grid[k + 1];
        if (u0 == u1) {
            if (in(u0)) meas += vol(r1) - vol(r0);
            continue;
        }
        bool in0 = in(u0), in1 = in(u1);
        if (in0 && in1) {
            meas += vol(r1) - vol(r0);
        } else if (in0 != in1) {
            double lam = (t - u0) / (u1 - u0);
            lam = std::clamp(lam, 0.0, 1.0);
            double r_cross = std::exp(std::log(r0) + lam * (std::log(r1) - std::log(r0)));
            if (in0)
                meas += vol(r_cross) - vol(r0);
            else
                meas += vol(r1) - vol(r_cross);
        }
    }
    return meas;
}

struct RearrangeCtx {
    const RadialProfile* u;
    const std::function<double(double)>* vol;
    double omega_over_n;
    int n;

    double radius_of_level(double t, bool strict) const {
        double mu = measure_above_impl(*u, *vol, t, strict);
        return std::pow(mu / omega_over_n, 1.0 / double(n));
    }
};

// value of the piecewise interpolant through (r_a,t_a),(r_b,t_b) at radius r
double interp_log(double r_a, double t_a, double r_b, double t_b, double r) {
    if (r <= r_a) return t_a;
    if (r >= r_b) return t_b;
    double lam = (std::log(r) - std::log(r_a)) / (std::log(r_b) - std::log(r_a));
    return t_a + lam * (t_b - t_a);
}

void refine_between(const RearrangeCtx& ctx, double t_hi, double r_hi_node, double t_lo,
                    double r_lo_node, double tol, int depth,
                    std::vector<std::pair<double, double>>* out) {
    // nodes named by level: t_hi > t_lo, radii r(t_hi) <= r(t_lo)
    if (depth <= 0 || t_hi - t_lo <= tol) return;
    double t_m = 0.5 * (t_hi + t_lo);
    double r_m = ctx.radius_of_level(t_m, true);
    double t_interp = interp_log(r_hi_node, t_hi, r_lo_node, t_lo, r_m);
    if (std::abs(t_interp - t_m) <= tol) return;
    refine_between(ctx, t_hi, r_hi_node, t_m, r_m, tol, depth - 1, out);
    out->emplace_back(r_m, t_m);
    refine_between(ctx, t_m, r_m, t_lo, r_lo_node, tol, depth - 1, out);
}

}  // namespace

double superlevel_measure(const RadialProfile& u, int n, double t, bool strict) {
    u.validate();
    double omega = sphere_measure(n);
    auto vol = [&](double r) { return omega / double(n) * std::pow(r, n); };
    return measure_above_impl(u, vol, t, strict);
}

RadialProfile rearrange_by_volume(const RadialProfile& u, int n,
                                  const std::function<double(double)>& vol,
                                  const std::vector<double>& extra_levels, double refine_tol) {
    u.validate();
    if (n < 2) throw range_error("rearrange_by_volume: n must be >= 2");
    double omega = sphere_measure(n);
    RearrangeCtx ctx{&u, &vol, omega / double(n), n};

    // distinct levels, descending
    std::vector<double> levels = u.values;
    levels.insert(levels.end(), extra_levels.begin(), extra_levels.end());
    std::sort(levels.begin(), levels.end(), std::greater<double>());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

    double t_max = levels.front();
    double t_min = levels.back();
    double vol_total = vol(u.grid.back());
    double R_star = std::pow(vol_total / ctx.omega_over_n, 1.0 / double(n));

    // (radius, level) pairs on the exact rearrangement, radii non-decreasing
    std::vector<std::pair<double, double>> pts;
    pts.emplace_back(0.0, t_max);
    {
        double a_out = ctx.radius_of_level(t_max, false);
        if (a_out > 0.0) pts.emplace_back(a_out, t_max);
    }
    double value_span = std::max(t_max - t_min, 1e-300);
    double tol = refine_tol * value_span;
    for (std::size_t j = 0; j + 1 < levels.size(); ++j) {
        double t_hi = levels[j], t_lo = levels[j + 1];
        double r_hi = pts.back().first;
        double r_lo_in = ctx.radius_of_level(t_lo, true);
        double r_lo_weak = ctx.radius_of_level(t_lo, false);
        refine_between(ctx, t_hi, r_hi, t_lo, r_lo_in, tol, 40, &pts);
        pts.emplace_back(r_lo_in, t_lo);
        if (r_lo_weak > r_lo_in * (1.0 + 1e-14) + 1e-300)
            pts.emplace_back(r_lo_weak, t_lo);  // plateau of u at this level
    }
    if (pts.back().first < R_star) pts.emplace_back(R_star, t_min);

    RadialProfile out;
    out.grid.reserve(pts.size());
    out.values.reserve(pts.size());
    for (auto& pr : pts) {
        if (!out.grid.empty() && !(pr.first > out.grid.back()))
            continue;  // collapse numerically coincident radii
        out.grid.push_back(pr.first);
        out.values.push_back(pr.second);
    }
    if (out.grid.size() < 2) {  // constant input
        out.grid.push_back(R_star);
        out.values.push_back(t_min);
    }
    out.validate();
    return out;
}

RadialProfile decreasing_rearrangement(const RadialProfile& u, int n,
                                       const std::vector<double>& extra_levels,
                                       double refine_tol) {
    double omega = sphere_measure(n);
    auto vol = [omega, n](double r) { return omega / double(n) * std::pow(r, n); };
    return rearrange_by_volume(u, n, vol, extra_levels, refine_tol);
}

// ---------------------------------------------------------------------------
// concentration
// ---------------------------------------------------------------------------

ConcentrationReport concentration_metric(const std::vector<RadialProfile>& seq, int n,
                                         const std::vector<double>& test_radii, double tol) {
    if (seq.empty()) throw range_error("concentration_metric: empty sequence");
    ConcentrationReport rep;
    rep.tol = tol;
    rep.test_radii = test_radii;
    for (const auto& u : seq) rep.total_energy.push_back(dirichlet_energy(u, n));
    rep.outside_energy.resize(test_radii.size());
    for (std::size_t j = 0; j < test_radii.size(); ++j) {
        double eps = test_radii[j];
        for (const auto& u : seq)
            rep.outside_energy[j].push_back(
                dirichlet_energy_annulus(u, n, std::min(eps, u.grid.back()), u.grid.back()));
    }
    bool ok = std::abs(rep.total_energy.back() - 1.0) <= tol;
    std::string why;
    if (!ok) why = "total energy away from 1";
    for (std::size_t j = 0; j < test_radii.size() && ok; ++j) {
        const auto& out = rep.outside_energy[j];
        if (out.back() > tol) {
            ok = false;
            why = strf("outside energy at radius %g stays above tol", test_radii[j]);
            break;
        }
        for (std::size_t i = 0; i + 1 < out.size(); ++i) {
            if (out[i + 1] > out[i] + tol / 10.0) {
                ok = false;
                why = strf("outside energy at radius %g not non-increasing", test_radii[j]);
                break;
            }
        }
    }
    rep.concentrates = ok;
    rep.detail = ok ? "concentrates at 0" : why;
    return rep;
}

// ---------------------------------------------------------------------------
// serialization
// ---------------------------------------------------------------------------

void write_profile_csv(const RadialProfile& u, std::ostream& out) {
    out << "r,u\n";
    for (std::size_t k = 0; k < u.grid.size(); ++k)
        out << strf("%.12g,%.12g\n", u.grid[k], u.values[k]);
}

RadialProfile read_profile_csv(std::istream& in) {
    RadialProfile u;
    std::string line;
    if (!std::getline(in, line)) throw io_error("profile csv: empty stream");
    // header may carry a trailing CR from foreign writers; we emit plain LF
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::size_t comma = line.find(',');
        if (comma == std::string::npos) throw io_error("profile csv: malformed row");
        u.grid.push_back(std::stod(line.substr(0, comma)));
        u.values.push_back(std::stod(line.substr(comma + 1)));
    }
    u.validate();
    return u;
}

void write_profile_json(const RadialProfile& u, int n, std::ostream& out) {
    auto write_array = [&](const std::vector<double>& a) {
        out << "[";
        for (std::size_t k = 0; k < a.size(); ++k)
            out << (k ? "," : "") << strf("%.17g", a[k]);
        out << "]";
    };
    out << "{\"grid\":";
    write_array(u.grid);
    out << ",\"n\":" << n << ",\"values\":";
    write_array(u.values);
    out << "}\n";
}

RadialProfile read_profile_json(std::istream& in, int* n_out) {
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw io_error(strf("profile json: %s", e.what()));
    }
    if (!j.contains("grid") || !j.contains("values"))
        throw io_error("profile json: missing grid/values");
    RadialProfile u;
    u.grid = j["grid"].get<std::vector<double>>();
    u.values = j["values"].get<std::vector<double>>();
    if (n_out) *n_out = j.value("n", 2);
    u.validate();
    return u;
}

}  // namespace smt
