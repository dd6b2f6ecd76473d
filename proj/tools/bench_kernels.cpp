// Timing harness for the OpenMP kernels against their serial reference.
// Each kernel is run with both execution modes on the same inputs; the table
// reports wall times, the speedup and the largest |serial - openmp| deviation
// (the kernels use fixed-block reductions, so the deviation must be 0).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "smt/core.hpp"
#include "smt/green.hpp"
#include "smt/maximizer.hpp"
#include "smt/parallel.hpp"
#include "smt/planar.hpp"
#include "smt/radial.hpp"

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point t0) {
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

struct BenchRow {
    std::string name;
    double serial_s = 0.0;
    double openmp_s = 0.0;
    double deviation = 0.0;
};

template <typename F>
BenchRow bench(const std::string& name, int repeats, F&& kernel) {
    BenchRow row;
    row.name = name;
    double v_serial = 0.0, v_openmp = 0.0;
    // one warmup per mode, then timed repeats
    (void)kernel(smt::par::exec::serial);
    auto t0 = clock_type::now();
    for (int k = 0; k < repeats; ++k) v_serial = kernel(smt::par::exec::serial);
    row.serial_s = seconds_since(t0) / repeats;
    (void)kernel(smt::par::exec::openmp);
    t0 = clock_type::now();
    for (int k = 0; k < repeats; ++k) v_openmp = kernel(smt::par::exec::openmp);
    row.openmp_s = seconds_since(t0) / repeats;
    row.deviation = std::abs(v_serial - v_openmp);
    return row;
}

}  // namespace

int main(int argc, char** argv) {
    int repeats = argc > 1 ? std::atoi(argv[1]) : 3;
    if (repeats < 1) repeats = 1;
    std::vector<BenchRow> rows;

    // Green-function ray fan: flow integrals across several levels
    {
        smt::BallGreen g = smt::make_ball_green(2, 1.0, 0.3);
        smt::RayFan fan = smt::make_fan(2, 4096);
        rows.push_back(bench("ray-fan flow integrals", repeats, [&](smt::par::exec mode) {
            double acc = 0.0;
            for (double t : {0.25, 0.5, 1.0, 2.0, 4.0})
                acc += smt::sublevel_flow_integral(g, t, fan, mode);
            return acc;
        }));
    }

    // level-data construction: splines of the level-set ratios
    {
        smt::BallGreen g = smt::make_ball_green(2, 1.0, 0.3);
        rows.push_back(bench("level-data build (257 nodes)", repeats, [&](smt::par::exec mode) {
            smt::GreenLevelData data = smt::make_level_data(g, 1.0, 512, 257, 34.0, mode);
            return data.w_at(1.0) + data.v_at(1.0);
        }));
    }

    // planar Dirichlet solve on the unit disk
    {
        smt::PlanarDomain dom = smt::make_disk_domain(1.0, 1.0 / 64.0, 0.3, 0.0);
        rows.push_back(bench("disk Dirichlet solve (h=1/64)", repeats, [&](smt::par::exec mode) {
            smt::PlanarGreen pg = smt::solve_planar_green(dom, mode);
            return pg.I;
        }));
    }

    // batch functional evaluations of perturbed ramp profiles
    {
        smt::ExponentConfig cfg = smt::make_config(2, 4.0 * M_PI, 0.0);
        std::vector<double> grid = smt::log_grid(1024, 30.0);
        std::vector<smt::RadialProfile> batch;
        for (int k = 0; k < 64; ++k)
            batch.push_back(smt::log_ramp_profile(0.8 + 0.002 * k, 0.05, 0.9, 1.0, 512, 64));
        rows.push_back(bench("batch functional eval (64 profiles)", repeats,
                             [&](smt::par::exec mode) {
                                 std::vector<double> vals(batch.size());
                                 smt::par::for_index(batch.size(), mode, [&](std::size_t j) {
                                     vals[j] = smt::functional_fixed(batch[j], cfg);
                                 });
                                 double acc = 0.0;
                                 for (double v : vals) acc += v;
                                 return acc;
                             }));
    }

    std::printf("%-36s %12s %12s %9s %12s\n", "kernel", "serial [s]", "openmp [s]", "speedup",
                "deviation");
    for (const BenchRow& row : rows)
        std::printf("%-36s %12.4f %12.4f %8.2fx %12.3e\n", row.name.c_str(), row.serial_s,
                    row.openmp_s, row.serial_s / std::max(row.openmp_s, 1e-12), row.deviation);

    for (const BenchRow& row : rows)
        if (row.deviation != 0.0) {
            std::printf("deviation detected: %s\n", row.name.c_str());
            return 1;
        }
    return 0;
}
