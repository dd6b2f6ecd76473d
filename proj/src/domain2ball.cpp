#include "smt/domain2ball.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "smt/common.hpp"
#include "smt/quadrature.hpp"

namespace smt {

// ============================================================
// symmetrization of grid data
// ============================================================

RadialProfile schwarz_symmetrize_grid(const PlanarDomain& dom,
                                      const std::vector<double>& full_values) {
    if (full_values.size() != dom.mask.size())
        throw range_error("schwarz_symmetrize_grid: values and mask sizes differ");
    std::vector<std::pair<double, std::size_t>> cells;  // (value, node id)
    for (std::size_t id = 0; id < dom.mask.size(); ++id) {
        if (!dom.mask[id]) continue;
        const double val = full_values[id];
        if (!(val >= 0.0))
            throw range_error("schwarz_symmetrize_grid: interior values must be non-negative");
        cells.emplace_back(val, id);
    }
    if (cells.empty()) throw range_error("schwarz_symmetrize_grid: no interior cells");
    std::stable_sort(cells.begin(), cells.end(),
                     [](const std::pair<double, std::size_t>& A,
                        const std::pair<double, std::size_t>& B) { return A.first > B.first; });

    const double cell_area = dom.h * dom.h;
    RadialProfile out;
    out.grid.reserve(cells.size() + 1);
    out.values.reserve(cells.size() + 1);
    out.grid.push_back(0.0);
    out.values.push_back(cells.front().first);
    for (std::size_t k = 0; k < cells.size(); ++k) {
        out.grid.push_back(std::sqrt((double(k) + 1.0) * cell_area / M_PI));
        out.values.push_back(cells[k].first);
    }
    out.validate();
    return out;
}

// ============================================================
// rearrangement inequality margins
// ============================================================

HlPsReport hl_ps_check(const GridFunction& u, double beta, double px, double py,
                       const std::vector<double>& levels, double tol) {
    if (u.nx < 2 || u.ny < 2 || !(u.h > 0.0))
        throw range_error("hl_ps_check: grid must be at least 2 x 2 with positive spacing");
    if (beta < 0.0 || beta >= 2.0) throw range_error("hl_ps_check: beta must lie in [0, 2)");
    for (double x : u.values)
        if (!(x >= 0.0)) throw range_error("hl_ps_check: values must be non-negative");

    std::vector<double> weights(u.values.size());
    for (int j = 0; j < u.ny; ++j)
        for (int i = 0; i < u.nx; ++i)
            weights[u.idx(i, j)] = cell_weight_average(i * u.h - px, j * u.h - py, u.h, beta);

    const double cell_area = u.h * u.h;
    const PiecewiseQuadratic mu = p1_distribution(u);
    const double energy_scale = std::max(1.0, p1_energy(u));

    HlPsReport rep;
    for (double a : levels) {
        const std::string param = strf("a=%.6g", a);
        const PairedBound hb = hl_restricted_pair(u.values, weights, a, cell_area);
        rep.rows.push_back(
            check_bound("hl_pairing", param, hb.rhs, hb.lhs, tol * std::max(1.0, hb.rhs)));
        rep.rows.push_back(check_bound("ps_above", param, p1_energy_above(u, a),
                                       rearranged_energy_above(mu, a), tol * energy_scale));
        rep.rows.push_back(check_bound("ps_below", param, p1_energy_below(u, a),
                                       rearranged_energy_below(mu, a), tol * energy_scale));
    }
    for (const CheckRow& r : rep.rows) rep.pass = rep.pass && r.pass;
    return rep;
}

// ============================================================
// harmonic replacement below a level
// ============================================================

RadialProfile harmonic_replacement(const RadialProfile& u, int n, double k) {
    u.validate();
    if (n < 2) throw range_error("harmonic_replacement: n must be >= 2");
    if (k < 1.0 || k > 2.0) throw range_error("harmonic_replacement: the level k must lie in [1, 2]");
    if (!u.non_increasing(1e-12))
        throw domain_error("harmonic_replacement: the profile must be non-increasing");
    if (!(u.max_value() >= k))
        throw range_error("harmonic_replacement: the super-level set {u >= k} is empty");
    if (u.values.back() >= k)
        throw range_error("harmonic_replacement: the super-level set touches the boundary");

    // outermost crossing, scanned from the boundary inward
    std::size_t j = u.grid.size() - 1;
    while (u.values[j] < k) --j;
    double r_cross;
    if (u.values[j] <= k) {  // the node sits exactly on the level
        r_cross = u.grid[j];
    } else if (j == 0) {
        // the constant core segment jumps below k; no continuous crossing
        throw range_error("harmonic_replacement: the level crosses the constant core segment");
    } else {
        const double lr0 = std::log(u.grid[j]);
        const double lr1 = std::log(u.grid[j + 1]);
        const double w = (k - u.values[j]) / (u.values[j + 1] - u.values[j]);
        r_cross = std::exp(lr0 + w * (lr1 - lr0));
    }

    RadialProfile v;
    v.grid.reserve(j + 3);
    v.values.reserve(j + 3);
    for (std::size_t i = 0; i <= j && u.grid[i] < r_cross * (1.0 - 1e-14); ++i) {
        v.grid.push_back(u.grid[i]);
        v.values.push_back(u.values[i]);
    }
    v.grid.push_back(r_cross);
    v.values.push_back(k);
    v.grid.push_back(u.outer_radius());
    v.values.push_back(0.0);
    v.validate();
    return v;
}

std::vector<double> harmonic_replacement_grid(const PlanarDomain& dom,
                                              const std::vector<double>& u_full, double k,
                                              par::exec mode, double tol) {
    if (u_full.size() != dom.mask.size())
        throw range_error("harmonic_replacement_grid: values and mask sizes differ");
    if (k < 1.0 || k > 2.0)
        throw range_error("harmonic_replacement_grid: the level k must lie in [1, 2]");

    PlanarDomain sub = dom;
    bool any = false;
    for (int j = 0; j < dom.ny; ++j)
        for (int i = 0; i < dom.nx; ++i) {
            if (!dom.interior(i, j) || u_full[dom.idx(i, j)] < k) continue;
            any = true;
            if (!dom.interior(i - 1, j) || !dom.interior(i + 1, j) || !dom.interior(i, j - 1) ||
                !dom.interior(i, j + 1))
                throw range_error(
                    "harmonic_replacement_grid: the super-level set touches the boundary");
            sub.mask[dom.idx(i, j)] = 0;
        }
    if (!any)
        throw range_error("harmonic_replacement_grid: the super-level set {u >= k} is empty");

    // frozen nodes and the true exterior both hand their current value to the
    // solve; coordinates map back to lattice indices exactly
    auto data = [&](double x, double y) {
        const int i = int(std::lround((x - dom.ox) / dom.h));
        const int j = int(std::lround((y - dom.oy) / dom.h));
        return u_full[dom.idx(i, j)];
    };
    return solve_dirichlet(sub, data, mode, tol).full;
}

// ============================================================
// log-coordinate view of a generator profile
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

struct Seg {
    double s_lo, s_hi;  // s = -log r, ascending
    double v_lo, v_hi;
    double slope;
};

struct LogView {
    std::vector<Seg> segs;
    double s_top = 0.0;
    double plateau = 0.0;
};

LogView make_log_view(const RadialProfile& u) {
    u.validate();
    if (std::fabs(u.outer_radius() - 1.0) > 1e-12)
        throw domain_error("build_radial: generator profiles must live on the unit ball");
    LogView view;
    const std::size_t M = u.grid.size() - 1;
    view.segs.reserve(M - 1);
    for (std::size_t k = M; k >= 2; --k) {
        Seg sg;
        sg.s_lo = k == M ? 0.0 : -std::log(u.grid[k]);
        sg.s_hi = -std::log(u.grid[k - 1]);
        sg.v_lo = u.values[k];
        sg.v_hi = u.values[k - 1];
        sg.slope = (sg.v_hi - sg.v_lo) / (sg.s_hi - sg.s_lo);
        view.segs.push_back(sg);
    }
    view.s_top = view.segs.empty() ? 0.0 : view.segs.back().s_hi;
    view.plateau = u.values[0];
    return view;
}

// n-energy of u = U(e^{-q G}) restricted to s in [s_lo, s_hi] by the coarea
// route: q^{n-1} sum |slope|^n int b(s) ds over the overlapped segments
double coarea_energy_range(const LogView& view, const ExponentConfig& cfg,
                           const GreenLevelData& data, double s_lo, double s_hi) {
    const double qn1 = std::pow(cfg.q(), cfg.n - 1);
    double acc = 0.0;
    for (const Seg& sg : view.segs) {
        const double lo = std::max(s_lo, sg.s_lo);
        const double hi = std::min(s_hi, sg.s_hi);
        if (!(hi > lo) || sg.slope == 0.0) continue;
        acc += qn1 * std::pow(std::fabs(sg.slope), cfg.n) *
               quad::adaptive(lo, hi, [&](double s) { return data.b_at(s); }, 1e-13, 1e-12);
    }
    return acc;
}

// weighted functional of u over {s >= s_lo}, plateau in closed form through
// the volume ratio
double functional_above_range(const LogView& view, const ExponentConfig& cfg,
                              const GreenLevelData& data, double s_lo, bool* ovf) {
    const double p = cfg.p();
    const double m = double(cfg.n) - cfg.beta;
    const double Ipow = std::pow(data.I, m);
    double acc = 0.0;
    for (const Seg& sg : view.segs) {
        const double lo = std::max(s_lo, sg.s_lo);
        if (!(sg.s_hi > lo)) continue;
        acc += quad::adaptive(
            lo, sg.s_hi,
            [&](double s) {
                const double sig = sg.v_lo + sg.slope * (s - sg.s_lo);
                const double arg = cfg.alpha * std::pow(std::fabs(sig), p) - m * s;
                return (exp_clamped(arg, ovf) - std::exp(-m * s)) * data.w_at(s);
            },
            1e-13, 1e-11);
    }
    acc *= cfg.omega * Ipow;
    const double s_top = std::max(s_lo, view.s_top);
    const double arg_top = cfg.alpha * std::pow(std::fabs(view.plateau), p) - m * s_top;
    acc += (exp_clamped(arg_top, ovf) - std::exp(-m * s_top)) * cfg.omega * Ipow / m *
           data.v_at(s_top);
    return acc;
}

}  // namespace

// ============================================================
// ball replacement sequence
// ============================================================

Domain2BallSequence build_radial(const std::vector<RadialProfile>& gen,
                                 const std::vector<double>& s_levels, const ExponentConfig& cfg,
                                 const BallGreen& g, const GreenLevelData& data,
                                 const Domain2BallOptions& opts) {
    if (cfg.n != g.n || cfg.n != data.n)
        throw domain_error("build_radial: dimension mismatch between cfg, g and data");
    if (std::fabs(cfg.beta - data.beta) > 1e-14)
        throw domain_error("build_radial: beta of cfg and level data differ");
    if (gen.empty()) throw range_error("build_radial: empty generator sequence");
    if (gen.size() != s_levels.size())
        throw range_error("build_radial: need one level per generator");
    if (opts.rays < 8) throw range_error("build_radial: need at least 8 rays");

    const int n = cfg.n;
    const double q = cfg.q();
    const double I = g.I();
    const double m = double(n) - cfg.beta;
    const RayFan fan = make_fan(n, opts.rays);
    auto vol_fn = [&](double r) { return r <= 1e-300 ? 0.0 : data.volume_of_s(-std::log(r)); };

    Domain2BallSequence seq;
    seq.n = n;
    seq.beta = cfg.beta;
    seq.I = I;
    seq.steps.reserve(gen.size());

    for (std::size_t iu = 0; iu < gen.size(); ++iu) {
        const RadialProfile& U = gen[iu];
        const double s = s_levels[iu];
        if (!(s > 0.0) || s > 1.0)
            throw range_error("build_radial: levels must lie in (0, 1]");
        if (!U.non_increasing(1e-12))
            throw domain_error("build_radial: generator profiles must be non-increasing");
        const LogView view = make_log_view(U);
        if (!(view.plateau > s))
            throw range_error("build_radial: the level must lie below the generator plateau");

        // {u >= s} = {G >= t_level}: invert the outermost ramp crossing
        double s_u = -1.0;
        for (const Seg& sg : view.segs)
            if (sg.v_lo <= s && s <= sg.v_hi && sg.slope > 0.0) {
                s_u = sg.s_lo + (s - sg.v_lo) / sg.slope;
                break;
            }
        if (s_u < 0.0)
            throw range_error("build_radial: the level is not crossed by a ramp segment");

        Domain2BallStep step;
        step.par.s = s;
        step.par.t_level = s_u / q;

        // enclosure certificate and the matched tail level
        const LevelEnclosure e0 = level_enclosure(g, step.par.t_level, fan);
        step.par.rho = e0.tau + e0.sigma;
        step.par.eps = 2.0 * e0.sigma + step.par.rho * 1e-12;
        step.par.lambda = -std::log(step.par.rho / I) / q;
        const double target = step.par.rho - step.par.eps;
        auto outer_gap = [&](double t) {
            const LevelEnclosure e = level_enclosure(g, t, fan);
            return e.tau + e.sigma - target;
        };
        double lo = step.par.lambda;
        if (outer_gap(lo) < 0.0)
            throw certificate_error("build_radial: enclosure does not bracket the tail level");
        double hi = lo;
        double stride = 0.25;
        bool bracketed = false;
        for (int it = 0; it < 64; ++it) {
            hi = lo + stride;
            if (outer_gap(hi) < 0.0) {
                bracketed = true;
                break;
            }
            stride *= 2.0;
        }
        if (!bracketed)
            throw certificate_error("build_radial: tail level bisection failed to bracket");
        double blo = lo, bhi = hi;
        while (bhi - blo > opts.bisect_tol) {
            const double mid = 0.5 * (blo + bhi);
            if (outer_gap(mid) >= 0.0)
                blo = mid;
            else
                bhi = mid;
        }
        step.par.t = 0.5 * (blo + bhi);
        step.par.delta = std::exp(-q * step.par.t);

        // rearrangement by Green level volumes; the level s is a node
        const RadialProfile u_star = rearrange_by_volume(U, n, vol_fn, {s}, opts.refine_tol);
        const double vol_weak = data.volume_of_s(q * step.par.t_level);
        step.par.a = std::pow(double(n) * vol_weak / cfg.omega, 1.0 / double(n));
        step.core_level = u_star.value_at(step.par.a);

        // splice: rescaled core inside B_delta, log tail outside
        RadialProfile v;
        v.grid.push_back(0.0);
        v.values.push_back(u_star.values[0]);
        const double scale = step.par.delta / step.par.a;
        for (std::size_t k = 1; k < u_star.grid.size(); ++k) {
            if (!(u_star.grid[k] < step.par.a * (1.0 - 1e-13))) break;
            v.grid.push_back(u_star.grid[k] * scale);
            v.values.push_back(u_star.values[k]);
        }
        v.grid.push_back(step.par.delta);
        v.values.push_back(s);
        v.grid.push_back(1.0);
        v.values.push_back(0.0);
        v.validate();
        step.v = std::move(v);

        // energies and functionals on both sides of the level
        step.tail_energy = std::pow(s, n) / std::pow(step.par.t, n - 1);
        step.core_energy = dirichlet_energy_annulus(step.v, n, 0.0, step.par.delta);
        step.v_energy = dirichlet_energy(step.v, n);
        step.u_energy_below = coarea_energy_range(view, cfg, data, 0.0, q * step.par.t_level);
        step.u_energy_above =
            coarea_energy_range(view, cfg, data, q * step.par.t_level, view.s_top);
        step.u_energy = step.u_energy_below + step.u_energy_above;

        bool ovf = false;
        step.F_above_domain = functional_above_range(view, cfg, data, q * step.par.t_level, &ovf);
        const FunctionalValue fc = functional_eval_annulus(step.v, cfg, 0.0, step.par.delta);
        step.F_core_scaled = std::pow(step.par.a / step.par.delta, m) * fc.value;
        step.overflow = ovf || fc.overflow;

        step.sup_radius = std::exp(-q * std::sqrt(step.par.t));
        step.sup_bound = s / std::sqrt(step.par.t);

        seq.steps.push_back(std::move(step));
    }
    return seq;
}

EnergyTransferReport energy_transfer_check(const Domain2BallSequence& seq) {
    if (seq.steps.empty()) throw range_error("energy_transfer_check: empty sequence");
    EnergyTransferReport rep;
    const int n = seq.n;
    for (std::size_t i = 0; i < seq.steps.size(); ++i) {
        const Domain2BallStep& st = seq.steps[i];
        const std::string param = strf("i=%zu;s=%.6g", i, st.par.s);
        rep.rows.push_back(
            check_close("d2b_splice_continuity", param, st.core_level, st.par.s, 1e-12));
        const double tail_num =
            dirichlet_energy_annulus(st.v, n, st.par.delta, st.v.outer_radius());
        rep.rows.push_back(check_close("d2b_tail_energy", param, tail_num, st.tail_energy,
                                       1e-10 * std::max(1.0, st.tail_energy)));
        rep.rows.push_back(check_close("d2b_energy_split", param,
                                       st.core_energy + st.tail_energy, st.v_energy,
                                       1e-10 * std::max(1.0, st.v_energy)));
        rep.rows.push_back(check_bound("d2b_capacity_below", param, st.u_energy_below,
                                       st.tail_energy, 1e-12));
        rep.rows.push_back(check_bound("d2b_energy_transfer", param, st.u_energy, st.v_energy,
                                       1e-8 * std::max(1.0, st.u_energy)));
        rep.rows.push_back(check_bound("d2b_functional_transfer", param, st.F_core_scaled,
                                       st.F_above_domain,
                                       1e-8 * std::max(1.0, st.F_core_scaled)));
        rep.rows.push_back(check_bound("d2b_sup_decay", param, st.sup_bound,
                                       st.v.value_at(st.sup_radius), 1e-12));
        if (i + 1 < seq.steps.size()) {
            const Domain2BallStep& nx = seq.steps[i + 1];
            rep.rows.push_back(check_bound("d2b_level_match_monotone", param,
                                           st.par.t - st.par.lambda,
                                           nx.par.t - nx.par.lambda, 1e-9));
        }
    }
    const Domain2BallStep& last = seq.steps.back();
    rep.rows.push_back(check_bound("d2b_level_match_final", "i=last", 0.05,
                                   last.par.t - last.par.lambda, 0.0));
    rep.rows.push_back(check_close("d2b_incenter_ratio", "i=last", last.par.a / last.par.delta,
                                   seq.I, 0.02 * seq.I));
    for (const CheckRow& r : rep.rows) rep.pass = rep.pass && r.pass;
    return rep;
}

}  // namespace smt
