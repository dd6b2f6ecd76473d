#pragma once

#include <cstdint>
#include <vector>

#include "smt/parallel.hpp"
#include "smt/radial.hpp"

namespace smt {

// ---------------------------------------------------------------------------
// fixed-budget evaluation (differentiable)
// ---------------------------------------------------------------------------

// F(u) on a fixed per-segment Gauss budget: the panel count of a segment
// depends only on its s-width, never on the values, so the map values -> F is
// smooth and the analytic gradient below matches finite differences of this
// exact function. Adaptive functional_eval stays the accuracy reference.
double functional_fixed(const RadialProfile& u, const ExponentConfig& cfg,
                        std::vector<double>* grad = nullptr);

// n-energy and its gradient in the node values (first segment carries none)
double energy_with_gradient(const RadialProfile& u, int n, std::vector<double>* grad = nullptr);

// ---------------------------------------------------------------------------
// constrained ascent
// ---------------------------------------------------------------------------

struct MaximizerOptions {
    int grid_nodes = 1024;
    double s_max = 30.0;
    int max_iters = 5000;
    int seeds = 4;
    std::uint64_t seed = 12345;
    int rearrange_every = 250;
    int stall_limit = 400;    // stop a seed after this many non-improving iters
    par::exec mode = par::exec::openmp;
};

struct MaximizerResult {
    RadialProfile best;               // unit n-energy
    double value = 0.0;               // adaptive-quadrature F(best)
    double value_fixed = 0.0;         // fixed-budget F(best), what the ascent saw
    double energy = 0.0;
    int iterations = 0;               // of the winning seed
    int winning_seed = -1;
    std::vector<double> seed_values;  // best fixed-budget F per seed
    bool overflow = false;
};

// Ascent of F over the unit-energy sphere of profiles on the default log
// grid: tangent-projected gradient steps with backtracking, exact rescaling
// to energy 1 (F and E are evaluated on the same fixed budget), and a
// periodic decreasing-rearrangement refresh that is kept only when it does
// not lose value. Seeds run as one parallel kernel; the report is
// deterministic for a given seed and thread-count independent.
MaximizerResult maximize_radial(const ExponentConfig& cfg, const MaximizerOptions& opts = {});

// ---------------------------------------------------------------------------
// concentrating families and the gap
// ---------------------------------------------------------------------------

struct ConcentrationLimit {
    std::vector<double> values;       // F along the family, index 1..i_max
    double extrapolated = 0.0;        // Richardson in i^{-p(p-1)}, p = n/(n-1)
    double closed_form = 0.0;         // n omega eps^{n-beta} / (n-beta), critical pairs
    bool critical = false;
    bool overflow = false;
};

// F along the concentrating log-ramp family supported in B_eps; the closed
// form is the exact limit at critical (alpha, beta)
ConcentrationLimit moser_family_limit(const ExponentConfig& cfg, double eps = 1.0, int i_max = 10);

// e^{H_{n-1}} omega eps^{n-beta} / (n-beta): the largest value a unit-energy
// sequence concentrating at the origin of B_eps can carry at a critical pair
double max_concentration_level(const ExponentConfig& cfg, double eps = 1.0);

struct GapReport {
    bool applicable = false;       // critical pairs only
    double best_value = 0.0;       // maximizer output
    double concentration = 0.0;    // max_concentration_level at eps = 1
    double gap = 0.0;              // best_value - concentration
    bool exceeds = false;          // strict gap > 0: concentration is not optimal
};

GapReport gap_report(const ExponentConfig& cfg, const MaximizerResult& result);

}  // namespace smt
