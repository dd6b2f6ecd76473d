#pragma once

#include "smt/core.hpp"
#include "smt/green.hpp"
#include "smt/parallel.hpp"
#include "smt/planar.hpp"
#include "smt/radial.hpp"

namespace smt {

// ---------------------------------------------------------------------------
// transplantation along Green level sets
// ---------------------------------------------------------------------------

// u = v(e^{-q G}) for a radial profile v on the unit ball: level sets of u
// are the level sets of G, the n-energy is preserved, and the weighted
// functional gains the factor I^{n-beta} in the concentration limit.

struct TransplantResult {
    double energy_ball = 0.0;    // n-energy of the input profile v
    double energy_direct = 0.0;  // ray quadrature of |grad u|^n (pointwise Green evals)
    double energy_coarea = 0.0;  // independent route through the flux spline
    double F_ball = 0.0;         // weighted functional of v on the unit ball
    double F_domain = 0.0;       // weighted functional of u, weight centered at the pole
    double I_pow = 0.0;          // I^{n-beta}
    bool overflow = false;
};

// closed-form ball route; cfg must match the dimension of g and the beta of
// data. The energy is computed twice on purpose: the direct route solves
// rho(s) per ray and quadrature point, the coarea route integrates the
// cached flux ratio, and tests compare both against energy_ball.
TransplantResult transplant_ball(const RadialProfile& v, const ExponentConfig& cfg,
                                 const BallGreen& g, const GreenLevelData& data, int rays = 256,
                                 par::exec mode = par::exec::openmp);

// grid route (n = 2): nodal transplant through the discrete Green function,
// 5-point Dirichlet energy, cell-averaged weighted functional
struct PlanarTransplantResult {
    double energy_ball = 0.0;
    double energy_grid = 0.0;
    double F_ball = 0.0;
    double F_grid = 0.0;
    double I = 0.0;
    bool overflow = false;
};

PlanarTransplantResult transplant_planar(const RadialProfile& v, const ExponentConfig& cfg,
                                         const PlanarGreen& pg,
                                         par::exec mode = par::exec::openmp);

// ---------------------------------------------------------------------------
// concentration bookkeeping for transplanted families
// ---------------------------------------------------------------------------

// Everything outside B_delta(pole) lies below the level t_max = max G on the
// delta-sphere, so sup and n-energy of the transplant there are bounded by
// the corresponding quantities of v over s in [0, q t_max].
struct OutsideMass {
    double t_max = 0.0;
    double sup_outside = 0.0;
    double energy_outside = 0.0;
};

OutsideMass transplant_outside_mass(const RadialProfile& v, const BallGreen& g,
                                    const GreenLevelData& data, double delta, int rays = 256);

}  // namespace smt
