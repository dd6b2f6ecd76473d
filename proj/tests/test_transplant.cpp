#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "smt/core.hpp"
#include "smt/green.hpp"
#include "smt/planar.hpp"
#include "smt/radial.hpp"
#include "smt/transplant.hpp"

using namespace smt;

TEST_CASE("centered transplant is the identity in every route") {
    // pole at the center: u = v(e^{-qG}) = v itself, I = 1
    ExponentConfig cfg = make_config(2, 2.0 * M_PI, 1.0);
    BallGreen g = make_ball_green(2, 1.0, 0.0);
    GreenLevelData data = make_level_data(g, cfg.beta, 512);
    RadialProfile v = log_ramp_profile(0.9, 0.05, 0.8);
    TransplantResult tr = transplant_ball(v, cfg, g, data, 512);
    CHECK(tr.I_pow == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(tr.energy_coarea == doctest::Approx(tr.energy_ball).epsilon(1e-10));
    CHECK(tr.energy_direct == doctest::Approx(tr.energy_ball).epsilon(1e-8));
    CHECK(tr.F_domain == doctest::Approx(tr.F_ball).epsilon(1e-6));
}

TEST_CASE("shifted transplant preserves energy and gains the incenter factor") {
    for (int n : {2, 3})
        for (double d : {0.3, 0.5}) {
            double beta = n == 2 ? 1.0 : 0.5;
            double alpha = 0.7 * critical_alpha_for(n, beta);
            ExponentConfig cfg = make_config(n, alpha, beta);
            BallGreen g = make_ball_green(n, 1.0, d);
            GreenLevelData data = make_level_data(g, beta, 512);
            RadialProfile v = moser_profile(2, 1.0, n);
            TransplantResult tr = transplant_ball(v, cfg, g, data, 512);
            double escale = std::max(1.0, tr.energy_ball);
            CHECK(std::abs(tr.energy_coarea - tr.energy_ball) < 1e-10 * escale);
            CHECK(std::abs(tr.energy_direct - tr.energy_ball) < 1e-6 * escale);
            CHECK(tr.I_pow ==
                  doctest::Approx(std::pow(g.I(), double(n) - beta)).epsilon(1e-12));
            // the weighted functional of the transplant dominates I^{n-beta} F(v)
            CHECK(tr.F_domain >= tr.I_pow * tr.F_ball - 1e-9 * std::max(1.0, tr.F_ball));
        }
}

TEST_CASE("functional gain across random profiles, offsets and weights") {
    std::mt19937_64 rng(61);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int rep = 0; rep < 10; ++rep) {
        int n = rep % 2 == 0 ? 2 : 3;
        double beta = uni(rng) * 1.2;
        double d = 0.1 + 0.5 * uni(rng);
        double alpha = (0.3 + 0.5 * uni(rng)) * critical_alpha_for(n, beta);
        ExponentConfig cfg = make_config(n, alpha, beta);
        BallGreen g = make_ball_green(n, 1.0, d);
        GreenLevelData data = make_level_data(g, beta, 256);
        double height = 0.4 + 0.8 * uni(rng);
        double r_in = 0.02 + 0.2 * uni(rng);
        RadialProfile v = log_ramp_profile(height, r_in, 0.6 + 0.3 * uni(rng));
        TransplantResult tr = transplant_ball(v, cfg, g, data, 256);
        CHECK_FALSE(tr.overflow);
        CHECK(tr.F_domain >= tr.I_pow * tr.F_ball - 1e-8 * std::max(1.0, tr.F_ball));
        CHECK(std::abs(tr.energy_coarea - tr.energy_ball) <
              1e-9 * std::max(1.0, tr.energy_ball));
    }
}

TEST_CASE("grid transplant tracks the closed-form routes") {
    ExponentConfig cfg = make_config(2, 2.0 * M_PI, 1.0);
    PlanarDomain dom = make_disk_domain(1.0, 1.0 / 64.0, 0.3, 0.0);
    PlanarGreen pg = solve_planar_green(dom, par::exec::openmp);
    RadialProfile v = log_ramp_profile(std::sqrt(std::log(10.0) / (2.0 * M_PI)), 0.1, 1.0);
    PlanarTransplantResult pt = transplant_planar(v, cfg, pg, par::exec::openmp);
    CHECK(pt.I == doctest::Approx(0.91).epsilon(0.02));
    CHECK(pt.energy_grid == doctest::Approx(pt.energy_ball).epsilon(0.02));
    CHECK(pt.F_grid >=
          std::pow(pt.I, 2.0 - cfg.beta) * pt.F_ball - 0.02 * std::max(1.0, pt.F_ball));
}

TEST_CASE("mass outside a ball around the pole dies along the family") {
    BallGreen g = make_ball_green(2, 1.0, 0.3);
    GreenLevelData data = make_level_data(g, 0.0, 512);
    double delta = 0.25;
    std::vector<double> sup, en;
    for (int i = 1; i <= 4; ++i) {
        RadialProfile v = moser_profile(i, 1.0, 2);
        OutsideMass om = transplant_outside_mass(v, g, data, delta, 512);
        CHECK(om.t_max > 0.0);
        sup.push_back(om.sup_outside);
        en.push_back(om.energy_outside);
    }
    for (std::size_t k = 1; k < sup.size(); ++k) {
        CHECK(sup[k] <= sup[k - 1] + 1e-12);
        CHECK(en[k] <= en[k - 1] + 1e-12);
    }
    CHECK(sup.back() < 0.2);
    CHECK(en.back() < 0.05);
}
