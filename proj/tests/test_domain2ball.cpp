#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "smt/core.hpp"
#include "smt/domain2ball.hpp"
#include "smt/green.hpp"
#include "smt/planar.hpp"
#include "smt/radial.hpp"

using namespace smt;

TEST_CASE("radial harmonic replacement keeps the top and bridges the bottom") {
    int n = 2;
    double k = 1.5;
    RadialProfile u = moser_profile(3, 1.0, n);
    RadialProfile v = harmonic_replacement(u, n, k);
    CHECK(v.non_increasing(1e-12));
    CHECK(v.values.back() == 0.0);
    CHECK(v.max_value() == doctest::Approx(u.max_value()).epsilon(1e-14));

    // v equals u above the crossing, and the bridge is worth omega k^n / s_cross^{n-1}
    double s_cross = 0.0;
    for (std::size_t idx = 0; idx + 1 < v.grid.size(); ++idx)
        if (v.values[idx] >= k && v.values[idx + 1] < k) s_cross = -std::log(v.grid[idx]);
    for (double r : {1e-6, 1e-4})
        CHECK(v.value_at(r) == doctest::Approx(u.value_at(r)).epsilon(1e-12));
    double bridge = sphere_measure(n) * std::pow(k, n) / std::pow(s_cross, n - 1);
    double top = dirichlet_energy_restricted(u, n, k, true);
    CHECK(dirichlet_energy(v, n) == doctest::Approx(top + bridge).epsilon(1e-9));
    CHECK(dirichlet_energy(v, n) <= dirichlet_energy(u, n) + 1e-12);

    // preconditions: the level must be crossed away from the boundary
    RadialProfile low = log_ramp_profile(0.5, 0.1, 0.9);
    CHECK_THROWS_AS(harmonic_replacement(low, n, 1.5), range_error);
}

TEST_CASE("grid harmonic replacement freezes the cap and lowers the energy") {
    PlanarDomain dom = make_disk_domain(1.0, 1.0 / 32.0, 0.0, 0.0);
    std::vector<double> u(std::size_t(dom.nx) * dom.ny, 0.0);
    for (int j = 0; j < dom.ny; ++j)
        for (int i = 0; i < dom.nx; ++i) {
            double x = dom.x_of(i), y = dom.y_of(j);
            if (dom.interior(i, j)) u[dom.idx(i, j)] = 2.0 * (1.0 - x * x - y * y);
        }
    double k = 1.5;
    std::vector<double> v = harmonic_replacement_grid(dom, u, k, par::exec::openmp);
    REQUIRE(v.size() == u.size());
    double emax = 0.0;
    for (int j = 0; j < dom.ny; ++j)
        for (int i = 0; i < dom.nx; ++i) {
            std::size_t id = dom.idx(i, j);
            if (u[id] >= k) {
                CHECK(v[id] == u[id]);  // frozen cap
            } else {
                CHECK(v[id] <= k + 1e-8);  // maximum principle below the cap
                CHECK(v[id] >= -1e-8);
                emax = std::max(emax, v[id]);
            }
        }
    CHECK(emax > 0.5);  // the bridge is not trivially zero
    CHECK(grid_energy(dom, v) <= grid_energy(dom, u) + 1e-9);
}

TEST_CASE("schwarz symmetrization of an indicator recovers the centered disk") {
    double h = 1.0 / 32.0;
    PlanarDomain dom = make_rect_domain(-1.0, 1.0, -1.0, 1.0, h, 0.0, 0.0);
    std::vector<double> u(std::size_t(dom.nx) * dom.ny, 0.0);
    std::size_t cells = 0;
    for (int j = 0; j < dom.ny; ++j)
        for (int i = 0; i < dom.nx; ++i) {
            double x = dom.x_of(i), y = dom.y_of(j);
            if (dom.interior(i, j) && std::hypot(x - 0.3, y - 0.1) < 0.4) {
                u[dom.idx(i, j)] = 1.0;
                ++cells;
            }
        }
    RadialProfile us = schwarz_symmetrize_grid(dom, u);
    CHECK(us.non_increasing(1e-12));
    CHECK(us.values[0] == doctest::Approx(1.0).epsilon(1e-14));
    double r0 = std::sqrt(double(cells) * h * h / M_PI);
    // the indicator drops from 1 to 0 within one cell of the matched radius
    CHECK(us.value_at(r0 - h) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(us.value_at(r0 + h) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(superlevel_measure(us, 2, 0.5) ==
          doctest::Approx(double(cells) * h * h).epsilon(1e-10));
}

TEST_CASE("hardy-littlewood and polya-szego margins on random node data") {
    std::mt19937_64 rng(67);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int rep = 0; rep < 10; ++rep) {
        GridFunction u;
        u.nx = 7 + rep % 3;
        u.ny = 7 + rep % 2;
        u.h = 0.1;
        u.values.assign(std::size_t(u.nx) * u.ny, 0.0);
        for (int j = 1; j + 1 < u.ny; ++j)
            for (int i = 1; i + 1 < u.nx; ++i) u.values[u.idx(i, j)] = uni(rng);
        double px = 0.05 + 0.1 * uni(rng) * (u.nx - 1);
        double py = 0.05 + 0.1 * uni(rng) * (u.ny - 1);
        HlPsReport rep1 = hl_ps_check(u, 0.5, px, py, {0.2, 0.5, 0.8});
        CHECK(rep1.pass);
        for (const CheckRow& row : rep1.rows) CHECK(row.pass);
    }
}

TEST_CASE("ball replacement sequence transfers energy and functional, n = 2") {
    ExponentConfig cfg = make_config(2, 4.0 * M_PI, 0.0);
    BallGreen g = make_ball_green(2, 1.0, 0.3);
    GreenLevelData data = make_level_data(g, cfg.beta, 512);
    std::vector<RadialProfile> gens = {moser_profile(2, 1.0, 2), moser_profile(3, 1.0, 2)};
    Domain2BallSequence seq = build_radial(gens, {1.0, 1.0}, cfg, g, data);
    REQUIRE(seq.steps.size() == 2);
    for (const Domain2BallStep& st : seq.steps) {
        CHECK(st.par.t >= st.par.lambda);
        CHECK(st.par.delta == doctest::Approx(std::exp(-g.q() * st.par.t)).epsilon(1e-13));
        CHECK(st.core_level == doctest::Approx(st.par.s).epsilon(1e-11));
        CHECK(st.v.non_increasing(1e-9));
        CHECK(st.u_energy == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(st.v_energy <= st.u_energy + 1e-9);
        CHECK(st.F_core_scaled >= st.F_above_domain - 1e-8 * std::max(1.0, st.F_above_domain));
    }
    // deeper index pins the splice radius ratio closer to the incenter
    double r0 = seq.steps[0].par.a / seq.steps[0].par.delta;
    double r1 = seq.steps[1].par.a / seq.steps[1].par.delta;
    CHECK(std::abs(r1 - seq.I) <= std::abs(r0 - seq.I) + 1e-9);

    EnergyTransferReport etc = energy_transfer_check(seq);
    CHECK(etc.pass);
    for (const CheckRow& row : etc.rows) CHECK(row.pass);
}

TEST_CASE("ball replacement sequence in dimension three with weight") {
    double alpha = 2.4 * std::sqrt(4.0 * M_PI);  // 0.8 of the critical strength
    ExponentConfig cfg = make_config(3, alpha, 0.5);
    BallGreen g = make_ball_green(3, 1.0, 0.4);
    GreenLevelData data = make_level_data(g, cfg.beta, 512);
    std::vector<RadialProfile> gens = {moser_profile(2, 1.0, 3), moser_profile(3, 1.0, 3)};
    Domain2BallSequence seq = build_radial(gens, {1.0, 1.0}, cfg, g, data);
    EnergyTransferReport etc = energy_transfer_check(seq);
    CHECK(etc.pass);
}

TEST_CASE("levels must sit under the generator plateau") {
    ExponentConfig cfg = make_config(2, 4.0 * M_PI, 0.0);
    BallGreen g = make_ball_green(2, 1.0, 0.3);
    GreenLevelData data = make_level_data(g, cfg.beta, 256);
    std::vector<RadialProfile> gens = {moser_profile(1, 1.0, 2)};
    CHECK_THROWS_AS(build_radial(gens, {1.0}, cfg, g, data), range_error);
}
