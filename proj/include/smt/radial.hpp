#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "smt/core.hpp"

namespace smt {

// Radial function on the ball B_R (R = grid.back()), sampled at radii
// grid[0] = 0 < grid[1] < ... < grid[M] and interpolated piecewise linearly
// in s = -log r between interior nodes. Oscillatory data is representable
// (values need not be monotone), and the log-ramp profiles of interest are
// exact: a segment linear in s has the closed-form n-energy
//   omega * |du|^n / (ds)^{n-1}.
// Any linear-in-s extension over [0, grid[1]] with nonzero slope would carry
// infinite n-energy, so that first segment is treated as the constant
// values[0]; finite-energy data therefore has values[0] == values[1] up to
// sampling error, and the first segment contributes zero energy.
struct RadialProfile {
    std::vector<double> grid;
    std::vector<double> values;

    double outer_radius() const { return grid.back(); }
    std::size_t nodes() const { return grid.size(); }

    // piecewise evaluation; r must lie in [0, outer_radius()]
    double value_at(double r) const;

    double max_value() const;
    bool non_increasing(double slack = 0.0) const;

    // throws range_error unless: sizes match and are >= 2, grid[0] == 0,
    // grid strictly increasing, all values finite
    void validate() const;
};

// log-spaced default grid: {0} then e^{-s_max} .. 1 (nodes-1 points, equal
// steps in s); nodes counts every node including r = 0
std::vector<double> log_grid(int nodes = 4096, double s_max = 40.0, double R = 1.0);

// uniform-in-r grid {0, R/(nodes-1), ..., R}
std::vector<double> uniform_grid(int nodes, double R = 1.0);

RadialProfile sample_profile(const std::vector<double>& grid,
                             const std::function<double(double)>& u_of_r);

// ---------------------------------------------------------------------------
// energies
// ---------------------------------------------------------------------------

// omega_{n-1} * int_0^R |u'(r)|^n r^{n-1} dr, exact per segment
double dirichlet_energy(const RadialProfile& u, int n);

// same, restricted to the annulus r in [r_lo, r_hi] (segments split exactly)
double dirichlet_energy_annulus(const RadialProfile& u, int n, double r_lo, double r_hi);

// energy restricted to the region {u >= level} (above = true) or {u <= level};
// the sub-intervals where the piecewise function crosses `level` are exact
double dirichlet_energy_restricted(const RadialProfile& u, int n, double level, bool above);

// ---------------------------------------------------------------------------
// weighted exponential functional
// ---------------------------------------------------------------------------

struct FunctionalValue {
    double value = 0.0;
    bool overflow = false;  // exponent clamp engaged somewhere
};

struct QuadOptions {
    double abs_tol = 1e-13;
    double rel_tol = 1e-11;
};

// F(u) = omega int_0^R (e^{alpha |u|^p} - 1) r^{n-1-beta} dr, p = n/(n-1).
// Each segment is integrated adaptively in s with the weight folded into the
// exponent (log-space), the first segment in closed form; exponents are
// clamped at 700 and the overflow flag reports it.
FunctionalValue functional_eval(const RadialProfile& u, const ExponentConfig& cfg,
                                const QuadOptions& opts = {});

// restriction to r in [r_lo, r_hi]
FunctionalValue functional_eval_annulus(const RadialProfile& u, const ExponentConfig& cfg,
                                        double r_lo, double r_hi, const QuadOptions& opts = {});

// restriction to the region {u >= level} / {u <= level}
FunctionalValue functional_eval_restricted(const RadialProfile& u, const ExponentConfig& cfg,
                                           double level, bool above,
                                           const QuadOptions& opts = {});

// ---------------------------------------------------------------------------
// transforms
// ---------------------------------------------------------------------------

// (T_a u)(x) = a^{(n-1)/n} u(|x|^{1/a}); node map r -> r^a, values scaled,
// exact in log coordinates and exactly n-energy preserving segment by
// segment. a > 0; T_{1/a} inverts.
RadialProfile transform_Ta(const RadialProfile& u, double a, int n);

// Truncated log ramp: value `height` on [0, r_in], 0 on [r_out, R], linear in
// s between. The Moser profile is the special case below.
RadialProfile log_ramp_profile(double height, double r_in, double r_out, double R = 1.0,
                               int ramp_nodes = 64, int tail_nodes = 16);

// Moser concentrating profile: u = i on [0, eps * e^{-q i^{n/(n-1)}}], the
// log ramp down to 0 at eps, 0 outside (q = omega^{1/(n-1)}). Breakpoints are
// grid nodes, so the representation and the unit n-energy are exact.
RadialProfile moser_profile(int i, double eps, int n, int ramp_nodes = 64, int tail_nodes = 16);

// ---------------------------------------------------------------------------
// rearrangement
// ---------------------------------------------------------------------------

// Decreasing rearrangement onto the same ball: equimeasurable with u, radial,
// non-increasing, right-continuous at plateaus. Node levels of u are placed
// exactly (measure computed in closed form per segment); extra_levels are
// inserted too, and level gaps are refined until the interpolant matches the
// exact rearrangement to refine_tol at gap midpoints.
RadialProfile decreasing_rearrangement(const RadialProfile& u, int n,
                                       const std::vector<double>& extra_levels = {},
                                       double refine_tol = 1e-10);

// Same construction with a caller-supplied volume structure: vol(r) must be
// the measure of {h < r} for the relevant domain slicing (vol increasing,
// vol(0) = 0); the output lives on the centered ball of equal total volume.
// Used to symmetrize transplanted functions, whose sublevel volumes come from
// Green level sets rather than omega r^n / n.
RadialProfile rearrange_by_volume(const RadialProfile& u, int n,
                                  const std::function<double(double)>& vol,
                                  const std::vector<double>& extra_levels = {},
                                  double refine_tol = 1e-10);

// |{u > t}| (strict) and |{u >= t}|, exact for the piecewise representation
double superlevel_measure(const RadialProfile& u, int n, double t, bool strict = true);

// ---------------------------------------------------------------------------
// concentration
// ---------------------------------------------------------------------------

struct ConcentrationReport {
    bool concentrates = false;
    double tol = 0.05;
    std::vector<double> total_energy;                    // per index
    std::vector<double> test_radii;
    std::vector<std::vector<double>> outside_energy;     // [radius][index]
    std::string detail;
};

// Verdict for "concentrates at 0": total energies within tol of 1 at the last
// index, and for every test radius the outside-the-ball energy is
// non-increasing (up to tol/10 wiggle) and ends below tol.
ConcentrationReport concentration_metric(const std::vector<RadialProfile>& seq, int n,
                                         const std::vector<double>& test_radii = {0.5, 0.1},
                                         double tol = 0.05);

// ---------------------------------------------------------------------------
// serialization
// ---------------------------------------------------------------------------

// CSV: header "r,u", one row per node, 12 significant digits, LF endings
void write_profile_csv(const RadialProfile& u, std::ostream& out);
RadialProfile read_profile_csv(std::istream& in);

// JSON: {"grid":[...],"n":...,"values":[...]}, sorted keys, 17 significant digits
void write_profile_json(const RadialProfile& u, int n, std::ostream& out);
RadialProfile read_profile_json(std::istream& in, int* n_out = nullptr);

}  // namespace smt
