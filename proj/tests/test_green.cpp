#include <array>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "smt/core.hpp"
#include "smt/green.hpp"

using namespace smt;

TEST_CASE("centered Green function is the radial log profile") {
    for (int n : {2, 3}) {
        BallGreen g = make_ball_green(n, 1.0, 0.0);
        double c = g.c();
        for (double rho : {0.9, 0.5, 0.1, 1e-3}) {
            CHECK(g.value(rho, 0.0) == doctest::Approx(c * std::log(1.0 / rho)).epsilon(1e-13));
            CHECK(g.value(0.0, rho) == doctest::Approx(c * std::log(1.0 / rho)).epsilon(1e-13));
        }
        CHECK(g.I() == doctest::Approx(1.0).epsilon(1e-15));
    }
}

TEST_CASE("shifted Green vanishes on the boundary and hits its levels") {
    for (int n : {2, 3})
        for (double d : {0.3, 0.5}) {
            BallGreen g = make_ball_green(n, 1.0, d);
            for (double phi : {0.0, 0.7, 1.9, 3.0}) {
                double rb = boundary_radius(g, phi);
                double y1 = g.d + rb * std::cos(phi), y2 = rb * std::sin(phi);
                CHECK(std::hypot(y1, y2) == doctest::Approx(1.0).epsilon(1e-12));
                CHECK(std::abs(g.value(y1, y2)) < 1e-12);
                for (double t : {0.3, 1.0, 2.5}) {
                    // check in the pole frame: forming pole + rl and letting
                    // value() subtract the pole again loses ~|grad G| * eps
                    // * |pole| = (c/rl) * 1e-16 * d, which at deep t exceeds
                    // the solver's own tolerance
                    double rl = level_radius(g, t, phi);
                    CHECK(g.value_rel(rl * std::cos(phi), rl * std::sin(phi)) ==
                          doctest::Approx(t).epsilon(1e-11));
                }
            }
        }
}

TEST_CASE("near the pole the Green function exposes the conformal incenter") {
    // G + c log|y - x| -> c log I
    for (int n : {2, 3})
        for (double d : {0.0, 0.3, 0.6}) {
            BallGreen g = make_ball_green(n, 1.0, d);
            double c = g.c();
            double p = 1e-8;
            double lim = g.value_rel(p, 0.0) + c * std::log(p);
            CHECK(lim == doctest::Approx(c * std::log(g.I())).epsilon(1e-6));
        }
}

TEST_CASE("gradient matches finite differences of the value") {
    BallGreen g = make_ball_green(2, 1.0, 0.4);
    BallGreen g3 = make_ball_green(3, 1.0, 0.4);
    for (const BallGreen* gg : {&g, &g3})
        for (auto [y1, y2] : std::vector<std::array<double, 2>>{
                 {0.1, 0.2}, {0.6, -0.3}, {-0.5, 0.1}, {0.45, 0.0}}) {
            double g1 = 0.0, g2 = 0.0;
            gg->gradient(y1, y2, &g1, &g2);
            double h = 1e-6;
            double d1 = (gg->value(y1 + h, y2) - gg->value(y1 - h, y2)) / (2.0 * h);
            double d2 = (gg->value(y1, y2 + h) - gg->value(y1, y2 - h)) / (2.0 * h);
            CHECK(g1 == doctest::Approx(d1).epsilon(1e-6));
            CHECK(g2 == doctest::Approx(d2).epsilon(1e-6));
        }
}

TEST_CASE("flow and flux identities along levels") {
    for (int n : {2, 3})
        for (double d : {0.0, 0.3}) {
            BallGreen g = make_ball_green(n, 1.0, d);
            RayFan fan = make_fan(n, 1024);
            double tol = d == 0.0 ? 1e-10 : 1e-7;
            for (double t : {0.5, 1.0, 3.0}) {
                CHECK(sublevel_flow_integral(g, t, fan, par::exec::openmp) ==
                      doctest::Approx(t).epsilon(tol));
                CHECK(level_surface_integral(g, t, 0.0, double(n - 1), fan, par::exec::openmp) ==
                      doctest::Approx(1.0).epsilon(tol));
            }
        }
}

TEST_CASE("deep superlevel volumes freeze at the incenter power") {
    for (int n : {2, 3})
        for (double d : {0.0, 0.3, 0.5}) {
            BallGreen g = make_ball_green(n, 1.0, d);
            RayFan fan = make_fan(n, 2048);
            double omega = sphere_measure(n);
            double q = g.q();
            double I = g.I();
            double t = 18.0 / q;
            double vol = superlevel_volume(g, t, fan, par::exec::openmp);
            CHECK(double(n) * vol * std::exp(double(n) * q * t) / omega ==
                  doctest::Approx(std::pow(I, n)).epsilon(1e-4));
            double beta = 0.5;
            double wv = superlevel_weighted_volume(g, beta, t, fan, par::exec::openmp);
            double m = double(n) - beta;
            CHECK(m * wv * std::exp(m * q * t) / omega ==
                  doctest::Approx(std::pow(I, m)).epsilon(1e-4));
        }
}

TEST_CASE("level enclosures certify the level set between two balls") {
    BallGreen g = make_ball_green(2, 1.0, 0.35);
    RayFan fan = make_fan(2, 512);
    for (double t : {0.5, 1.5, 3.0}) {
        LevelEnclosure enc = level_enclosure(g, t, fan);
        CHECK(enc.tau == doctest::Approx(g.I() * std::exp(-g.q() * t)).epsilon(1e-13));
        CHECK(enc.sigma >= 0.0);
        CHECK(enc.sigma < enc.tau);
        // sample the level set off the fan angles; distances stay inside the band
        for (double phi : {0.123, 1.456, 2.789, 4.012, 5.345}) {
            double rl = level_radius(g, t, phi);
            CHECK(rl >= enc.tau - enc.sigma - 1e-14);
            CHECK(rl <= enc.tau + enc.sigma + 1e-14);
        }
    }
}

TEST_CASE("level data ratios: flux is one, chain is above one, volumes match") {
    BallGreen g = make_ball_green(2, 1.0, 0.3);
    GreenLevelData data = make_level_data(g, 1.0, 512);
    RayFan fan = make_fan(2, 512);
    for (double s : {0.0, 0.5, 2.0, 8.0, 20.0, 33.0}) {
        CHECK(data.b_at(s) == doctest::Approx(1.0).epsilon(1e-8));
        CHECK(data.w_at(s) >= 1.0 - 1e-10);
        CHECK(data.v_at(s) >= 1.0 - 1e-10);
    }
    // volume_of_s reads the vol_ratio spline, so it carries the (delta s)^4
    // interpolation error of the default 257-node cache, about 1e-5 here
    for (double s : {0.5, 2.0, 5.0}) {
        double t = s / g.q();
        CHECK(data.volume_of_s(s) ==
              doctest::Approx(superlevel_volume(g, t, fan, par::exec::openmp)).epsilon(1e-4));
    }
    // centered pole: every ratio is exactly 1
    BallGreen gc = make_ball_green(2, 1.0, 0.0);
    GreenLevelData dc = make_level_data(gc, 1.0, 256);
    for (double s : {0.0, 1.0, 10.0}) {
        CHECK(dc.w_at(s) == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(dc.v_at(s) == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(dc.vol_at(s) == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("level data is identical across execution modes") {
    BallGreen g = make_ball_green(3, 1.0, 0.4);
    GreenLevelData a = make_level_data(g, 0.5, 256, 129, 34.0, par::exec::openmp);
    GreenLevelData b = make_level_data(g, 0.5, 256, 129, 34.0, par::exec::serial);
    for (double s : {0.0, 0.7, 3.3, 12.0, 30.0}) {
        CHECK(a.w_at(s) == b.w_at(s));
        CHECK(a.v_at(s) == b.v_at(s));
        CHECK(a.vol_at(s) == b.vol_at(s));
    }
}

TEST_CASE("polygon quadrature on squares and circles") {
    Polygon square;
    square.pts = {{0.5, 0.5}, {-0.5, 0.5}, {-0.5, -0.5}, {0.5, -0.5}};
    CHECK(polygon_weighted_area(square, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(polygon_weighted_perimeter(square, 0.0) == doctest::Approx(4.0).epsilon(1e-12));

    Polygon circle;
    int N = 4096;
    double r = 0.8;
    for (int k = 0; k < N; ++k) {
        double a = 2.0 * M_PI * k / N;
        circle.pts.push_back({r * std::cos(a), r * std::sin(a)});
    }
    double beta = 0.7;
    // centered disk: A_beta = 2 pi r^{2-beta} / (2-beta)
    CHECK(polygon_weighted_area(circle, beta) ==
          doctest::Approx(2.0 * M_PI * std::pow(r, 2.0 - beta) / (2.0 - beta)).epsilon(1e-5));
    CHECK(polygon_weighted_perimeter(circle, beta) ==
          doctest::Approx(2.0 * M_PI * r * std::pow(r, -beta)).epsilon(1e-5));
}

TEST_CASE("the weighted area bound is tight on centered disks") {
    for (double beta : {0.0, 0.5, 1.0})
        for (double r : {0.3, 1.0, 1.7}) {
            int n = 2;
            double m = double(n) - beta;
            double A = 2.0 * M_PI * std::pow(r, m) / m;
            double P = 2.0 * M_PI * r * std::pow(r, -(n - 1.0) * beta / n);
            CHECK(alvino_area_bound(P, n, beta) == doctest::Approx(A).epsilon(1e-12));
            // and it really is an upper bound for an off-center disk
            Polygon off;
            int N = 2048;
            for (int k = 0; k < N; ++k) {
                double a = 2.0 * M_PI * k / N;
                off.pts.push_back({0.2 + 0.6 * std::cos(a), 0.6 * std::sin(a)});
            }
            double A_off = polygon_weighted_area(off, beta);
            double P_off = polygon_weighted_perimeter(off, (n - 1.0) * beta / n);
            CHECK(alvino_area_bound(P_off, n, beta) >= A_off - 1e-9);
        }
}
