#pragma once

#include <vector>

#include "smt/core.hpp"
#include "smt/green.hpp"
#include "smt/hlps.hpp"
#include "smt/planar.hpp"
#include "smt/radial.hpp"
#include "smt/report.hpp"

namespace smt {

// ============================================================
// symmetrization of grid data
// ============================================================

// Schwarz symmetrization of nodal data: every interior node of dom owns the
// h x h cell around it (the lattice is offset by h/2, so nodes are cell
// centers). Cells are sorted by value, descending, ties broken by node index
// so the result is deterministic, and stacked into centered annuli of equal
// area. The output lives on the ball of radius R with |interior| = pi R^2
// (n = 2), and distribution functions match to within one cell.
RadialProfile schwarz_symmetrize_grid(const PlanarDomain& dom,
                                      const std::vector<double>& full_values);

// ============================================================
// rearrangement inequality margins
// ============================================================

// Hardy-Littlewood and restricted Polya-Szego margins for P1 node data u
// (node (i, j) at (i h, j h), weight pole at (px, py)). For every level a the
// rows record, as one-sided bounds that must hold with margin >= -tol:
//   hl_pairing: sum_{u >= a} u w  <=  the separately sorted pairing,
//   ps_above:   rearranged energy above a  <=  grid energy above a,
//   ps_below:   rearranged energy below a  <=  grid energy below a.
struct HlPsReport {
    std::vector<CheckRow> rows;
    bool pass = true;
};
HlPsReport hl_ps_check(const GridFunction& u, double beta, double px, double py,
                       const std::vector<double>& levels, double tol = 1e-9);

// ============================================================
// harmonic replacement below a level
// ============================================================

// Replace a non-increasing radial profile below the level k in [1, 2]: v = u
// where u >= k, and on the annulus from the crossing radius to the boundary
// v is the radial n-harmonic bridge (for every n the radial n-Laplacian
// forces c1 log r + c2) with v = k at the crossing and 0 at the boundary.
// Guarantees dirichlet_energy(v) <= dirichlet_energy(u) (the bridge is the
// one-dimensional capacity minimizer) and 0 <= v <= k below the crossing.
// Throws range_error when {u >= k} is empty or touches the boundary.
RadialProfile harmonic_replacement(const RadialProfile& u, int n, double k);

// Grid analogue at n = 2: nodes with u >= k are frozen as Dirichlet data
// (exterior nodes keep their values, normally 0) and the remaining interior
// nodes are re-solved harmonically. The 5-point solve minimizes grid_energy
// among functions with the frozen data, so the discrete energy cannot
// increase beyond the solver tolerance. Same preconditions as above.
std::vector<double> harmonic_replacement_grid(const PlanarDomain& dom,
                                              const std::vector<double>& u_full, double k,
                                              par::exec mode, double tol = 1e-12);

// ============================================================
// ball replacement sequence
// ============================================================

// Matched quantities for one index of the sequence. The domain function is
// u = U(e^{-q G}) for a non-increasing generator profile U on the unit ball;
// s is the level with {u >= s} = {G >= t_level}.
struct Domain2BallParams {
    double s = 0.0;        // level in (0, 1]
    double t_level = 0.0;  // G-level of the super-level set
    double rho = 0.0;      // certified: B_{rho-eps} subset {u >= s} subset B_{rho+eps}
    double eps = 0.0;
    double lambda = 0.0;   // -(1/q) log(rho / I)
    double t = 0.0;        // matched tail level: tau(t) + sigma(t) = rho - eps, t >= lambda
    double delta = 0.0;    // e^{-q t}, splice radius of the ball competitor
    double a = 0.0;        // |{u* >= s}| = |B_a| for the rearrangement u*
};

struct Domain2BallStep {
    Domain2BallParams par;
    RadialProfile v;  // rescaled rearrangement core inside B_delta + log tail

    double core_level = 0.0;      // u*(a), equals s up to rearrangement tolerance
    double tail_energy = 0.0;     // s^n / t^{n-1}, closed form
    double core_energy = 0.0;     // n-energy of v inside B_delta
    double v_energy = 0.0;        // n-energy of v on the unit ball
    double u_energy = 0.0;        // n-energy of u over the domain (coarea route)
    double u_energy_below = 0.0;  // over {u < s}
    double u_energy_above = 0.0;  // over {u >= s}
    double F_above_domain = 0.0;  // weighted functional of u over {u >= s}
    double F_core_scaled = 0.0;   // (a / delta)^{n - beta} F(v; B_delta)
    double sup_radius = 0.0;      // e^{-q sqrt(t)}
    double sup_bound = 0.0;       // s / sqrt(t), v <= this outside sup_radius
    bool overflow = false;
};

struct Domain2BallSequence {
    int n = 2;
    double beta = 0.0;
    double I = 1.0;
    std::vector<Domain2BallStep> steps;
};

struct Domain2BallOptions {
    int rays = 512;             // fan resolution for the enclosure certificates
    double bisect_tol = 1e-12;  // width tolerance of the tail-level bisection
    double refine_tol = 1e-10;  // rearrangement refinement tolerance
    par::exec mode = par::exec::openmp;
};

// Build the radial ball competitors for a concentrating family: per index,
// certify the super-level enclosure from the ray fan, match the tail level t
// by bisection, rearrange u by Green level volumes and splice the rescaled
// core with the exact log tail. Levels must satisfy 0 < s <= 1 and lie
// strictly below the generator plateau. Deep generators are limited by the
// underflow of the super-level volume e^{-n s}; with Moser generators this
// means index <= 5 at n = 2 and index <= 8 at n = 3.
Domain2BallSequence build_radial(const std::vector<RadialProfile>& gen,
                                 const std::vector<double>& s_levels, const ExponentConfig& cfg,
                                 const BallGreen& g, const GreenLevelData& data,
                                 const Domain2BallOptions& opts = {});

// Transfer margins for a built sequence. Per index:
//   d2b_splice_continuity  u*(a) = s to 1e-12,
//   d2b_tail_energy        numeric tail energy = s^n / t^{n-1} to 1e-10,
//   d2b_energy_split       core + tail = total to 1e-10,
//   d2b_capacity_below     energy of u below s >= s^n / t^{n-1},
//   d2b_energy_transfer    energy of v <= energy of u,
//   d2b_functional_transfer F(u; {u >= s}) <= (a/delta)^{n-beta} F(v; B_delta),
//   d2b_sup_decay          v(e^{-q sqrt(t)}) <= s / sqrt(t).
// Across indices: t - lambda decreases (slack 1e-9) and ends below 0.05, and
// a / delta is within 2 percent of I at the last index.
struct EnergyTransferReport {
    std::vector<CheckRow> rows;
    bool pass = true;
};
EnergyTransferReport energy_transfer_check(const Domain2BallSequence& seq);

}  // namespace smt
