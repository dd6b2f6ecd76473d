#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace smt {

// ---------------------------------------------------------------------------
// singular weight averages over grid cells (n = 2)
// ---------------------------------------------------------------------------

// mean of |y|^{-beta} over the square cell of side h centered at (cx, cy),
// weight origin at 0, beta in [0, 2). Exact in the radial direction (polar
// corner-rectangle reduction), so cells containing the origin are fine.
double cell_weight_average(double cx, double cy, double h, double beta);

// ---------------------------------------------------------------------------
// rearrangement inequalities for cell functions
// ---------------------------------------------------------------------------

// Discrete Hardy-Littlewood with a level restriction, on equal-area cells:
//   lhs = sum_{f_k >= a} f_k g_k * cell_area
//   rhs = same sum after replacing (f, g) by their separately sorted
//         decreasing rearrangements
// lhs <= rhs holds for every threshold a and all f, g >= 0.
struct PairedBound {
    double lhs = 0.0, rhs = 0.0;
};
PairedBound hl_restricted_pair(const std::vector<double>& f, const std::vector<double>& g,
                               double a, double cell_area);

// ---------------------------------------------------------------------------
// piecewise linear interpolants on node grids
// ---------------------------------------------------------------------------

// nx x ny node values with spacing h; every cell is split into the triangles
// (00,10,11) and (00,11,01), giving the standard P1 interpolant
struct GridFunction {
    int nx = 0, ny = 0;
    double h = 0.0;
    std::vector<double> values;  // row-major

    std::size_t idx(int i, int j) const { return std::size_t(j) * nx + i; }
};

// distribution function mu(t) = |{u > t}| of the P1 interpolant: piecewise
// quadratic between consecutive distinct node values (flat triangles only
// produce jumps at their value)
struct PiecewiseQuadratic {
    std::vector<double> breaks;                 // ascending distinct values
    std::vector<std::array<double, 3>> coeff;   // {c0,c1,c2} per interval
    double total = 0.0;                         // mu below the smallest value

    double operator()(double t) const;
};

PiecewiseQuadratic p1_distribution(const GridFunction& u);

// Dirichlet integrals of the interpolant: gradients are constant per
// triangle, and the area of a triangle above a level is an explicit
// quadratic, so the restricted energies are exact
double p1_energy(const GridFunction& u);
double p1_energy_above(const GridFunction& u, double t);  // int_{u > t} |grad u|^2
double p1_energy_below(const GridFunction& u, double t);  // int_{u < t} |grad u|^2

// Dirichlet energy of the symmetric decreasing rearrangement restricted to
// {u* > t} resp. {u* < t}: int 4 pi mu / (-mu') dtau over the level range,
// in closed form on each quadratic interval of mu. Exact for the rearranged
// interpolant, hence directly comparable with the restricted energies above.
double rearranged_energy_above(const PiecewiseQuadratic& mu, double t);
double rearranged_energy_below(const PiecewiseQuadratic& mu, double t);

}  // namespace smt
