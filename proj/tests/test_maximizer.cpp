#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "smt/core.hpp"
#include "smt/maximizer.hpp"
#include "smt/radial.hpp"

using namespace smt;

namespace {

RadialProfile bump_profile(std::mt19937_64& rng, int nodes, double s_max) {
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    RadialProfile u;
    u.grid = log_grid(nodes, s_max);
    u.values.assign(u.grid.size(), 0.0);
    double c = 2.0 + uni(rng) * (s_max - 4.0), w = 1.0 + 3.0 * uni(rng), h = 0.3 + uni(rng);
    for (std::size_t k = 1; k + 1 < u.grid.size(); ++k) {
        double s = -std::log(u.grid[k]);
        double z = (s - c) / w;
        u.values[k] = h * std::exp(-z * z) + 0.1 * h * std::exp(-s * s / 9.0);
    }
    u.values[0] = u.values[1];
    u.values.back() = 0.0;
    return u;
}

}  // namespace

TEST_CASE("fixed-budget functional agrees with the adaptive one on ramps") {
    ExponentConfig cfg = make_config(2, 4.0 * M_PI, 0.0);
    RadialProfile u = log_ramp_profile(0.8, 0.05, 0.9);
    double fixed = functional_fixed(u, cfg);
    double adaptive = functional_eval(u, cfg).value;
    CHECK(fixed == doctest::Approx(adaptive).epsilon(1e-9));
}

TEST_CASE("analytic gradients match central differences") {
    std::mt19937_64 rng(41);
    for (int rep = 0; rep < 10; ++rep) {
        int n = rep % 2 == 0 ? 2 : 3;
        double beta = rep % 3 == 0 ? 0.5 : 0.0;
        ExponentConfig cfg = make_config(n, 0.5 * critical_alpha_for(n, beta), beta);
        RadialProfile u = bump_profile(rng, 97, 18.0);

        std::vector<double> gF, gE;
        double f0 = functional_fixed(u, cfg, &gF);
        double e0 = energy_with_gradient(u, n, &gE);
        CHECK(e0 == doctest::Approx(dirichlet_energy(u, n)).epsilon(1e-12));
        CHECK(f0 > 0.0);

        std::uniform_int_distribution<std::size_t> pick(1, u.values.size() - 2);
        for (int probe = 0; probe < 6; ++probe) {
            std::size_t k = pick(rng);
            double h = 1e-6 * std::max(1.0, std::abs(u.values[k]));
            RadialProfile up = u, um = u;
            up.values[k] += h;
            um.values[k] -= h;
            if (k == 1) { up.values[0] = up.values[1]; um.values[0] = um.values[1]; }
            double dF = (functional_fixed(up, cfg) - functional_fixed(um, cfg)) / (2.0 * h);
            double dE = (energy_with_gradient(up, n) - energy_with_gradient(um, n)) / (2.0 * h);
            double gFk = gF[k] + (k == 1 ? gF[0] : 0.0);  // node 0 is tied to node 1
            double gEk = gE[k] + (k == 1 ? gE[0] : 0.0);
            if (std::abs(dF) > 1e-8)
                CHECK(gFk == doctest::Approx(dF).epsilon(1e-5));
            else
                CHECK(std::abs(gFk - dF) < 1e-8);
            if (std::abs(dE) > 1e-8) CHECK(gEk == doctest::Approx(dE).epsilon(1e-5));
        }
    }
}

TEST_CASE("concentration level closed forms") {
    ExponentConfig c2 = make_config(2, 4.0 * M_PI, 0.0);
    CHECK(max_concentration_level(c2, 1.0) ==
          doctest::Approx(std::exp(1.0) * M_PI).epsilon(1e-12));
    ExponentConfig c3 = make_config(3, 3.0 * std::sqrt(4.0 * M_PI), 0.0);
    CHECK(max_concentration_level(c3, 1.0) ==
          doctest::Approx(std::exp(1.5) * 4.0 * M_PI / 3.0).epsilon(1e-12));
    // scaling in the support radius: factor eps^{n-beta}
    CHECK(max_concentration_level(c2, 0.5) ==
          doctest::Approx(0.25 * std::exp(1.0) * M_PI).epsilon(1e-12));
}

TEST_CASE("moser family limit extrapolates to the closed form at critical pairs") {
    // convergence is in i^{-p(p-1)}: fast at n = 2, slow at n = 3, so the
    // deep-index budget and the tolerance differ between the dimensions
    for (auto [n, beta, i_max, tol] : {std::tuple<int, double, int, double>{2, 0.0, 10, 1e-4},
                                       {2, 1.0, 10, 1e-4},
                                       {3, 0.0, 16, 1.5e-3}}) {
        ExponentConfig cfg = make_config(n, critical_alpha_for(n, beta), beta);
        ConcentrationLimit lim = moser_family_limit(cfg, 1.0, i_max);
        CHECK(lim.critical);
        double m = double(n) - beta;
        CHECK(lim.closed_form == doctest::Approx(double(n) * cfg.omega / m).epsilon(1e-14));
        CHECK(lim.extrapolated == doctest::Approx(lim.closed_form).epsilon(tol));
        // and the family stays below the concentration reference
        CHECK(lim.extrapolated <= 1.01 * max_concentration_level(cfg, 1.0));
    }
    ExponentConfig sub = make_config(2, 2.0 * M_PI, 0.0);
    CHECK_FALSE(moser_family_limit(sub, 1.0, 8).critical);
}

TEST_CASE("ascent beats the concentration level at the critical pair") {
    ExponentConfig cfg = make_config(2, 4.0 * M_PI, 0.0);
    MaximizerOptions opts;
    opts.grid_nodes = 257;
    opts.s_max = 24.0;
    opts.max_iters = 900;
    opts.seeds = 2;
    MaximizerResult res = maximize_radial(cfg, opts);
    CHECK(res.energy == doctest::Approx(1.0).epsilon(1e-9));
    CHECK_FALSE(res.overflow);
    CHECK(res.value == doctest::Approx(res.value_fixed).epsilon(1e-5));
    GapReport gap = gap_report(cfg, res);
    CHECK(gap.applicable);
    CHECK(gap.best_value > 9.0);  // well above e*pi = 8.5397
    CHECK(gap.exceeds);
    CHECK(gap.gap == doctest::Approx(gap.best_value - gap.concentration).epsilon(1e-12));
}

TEST_CASE("ascent is deterministic and mode-independent") {
    ExponentConfig cfg = make_config(2, 4.0 * M_PI, 0.0);
    MaximizerOptions opts;
    opts.grid_nodes = 129;
    opts.s_max = 20.0;
    opts.max_iters = 150;
    opts.seeds = 2;
    MaximizerResult a = maximize_radial(cfg, opts);
    MaximizerResult b = maximize_radial(cfg, opts);
    CHECK(a.value_fixed == b.value_fixed);
    CHECK(a.iterations == b.iterations);
    opts.mode = par::exec::serial;
    MaximizerResult c = maximize_radial(cfg, opts);
    CHECK(a.value_fixed == c.value_fixed);
    CHECK(a.winning_seed == c.winning_seed);
}
