#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "smt/green.hpp"
#include "smt/parallel.hpp"

namespace smt {

// ---------------------------------------------------------------------------
// node-mask grid domains (n = 2)
// ---------------------------------------------------------------------------

// Uniform node grid with spacing h; node (i, j) sits at (ox + i h, oy + j h).
// The builders offset the lattice by h/2 so that symmetry points like the
// pole or the origin never coincide with a node (the grid Green function is
// sampled at nodes and must not see its own singularity). mask = 1 marks the
// interior unknowns; every other node is Dirichlet data.
struct PlanarDomain {
    int nx = 0, ny = 0;
    double h = 0.0;
    double ox = 0.0, oy = 0.0;
    double px = 0.0, py = 0.0;  // pole = weight center, strictly interior
    std::vector<std::uint8_t> mask;

    std::size_t idx(int i, int j) const { return std::size_t(j) * nx + i; }
    double x_of(int i) const { return ox + h * i; }
    double y_of(int j) const { return oy + h * j; }
    bool interior(int i, int j) const {
        return i >= 0 && j >= 0 && i < nx && j < ny && mask[idx(i, j)] != 0;
    }
};

PlanarDomain make_disk_domain(double R, double h, double px, double py);
PlanarDomain make_rect_domain(double x_lo, double x_hi, double y_lo, double y_hi, double h,
                              double px, double py);

// ---------------------------------------------------------------------------
// Dirichlet solve
// ---------------------------------------------------------------------------

struct DirichletSolution {
    std::vector<double> full;  // all nodes; exterior nodes carry the data g
    int iterations = 0;
    double residual = 0.0;  // relative CG residual reached
};

// 5-point Laplace solve with data g sampled at the exterior nodes, by
// conjugate gradients with fixed-block deterministic reductions: the result
// is bitwise identical for any thread count and for serial vs openmp.
DirichletSolution solve_dirichlet(const PlanarDomain& dom,
                                  const std::function<double(double, double)>& g, par::exec mode,
                                  double tol = 1e-12, int max_iters = 100000);

// ---------------------------------------------------------------------------
// grid Green function
// ---------------------------------------------------------------------------

// G = -c log|y - pole| + H on the grid, c = 1/(2 pi); H is the discrete
// harmonic extension of c log|boundary - pole|, so G vanishes at exterior
// nodes by construction. I = e^{2 pi H(pole)} estimates the conformal
// incenter.
struct PlanarGreen {
    PlanarDomain dom;
    std::vector<double> Hfull;
    std::vector<double> Gfull;
    double I = 0.0;
    int cg_iterations = 0;
    double cg_residual = 0.0;

    double H_at(double x, double y) const;                 // bilinear
    double value(double x, double y) const;                // G, analytic log + H
    std::array<double, 2> gradient(double x, double y) const;
};

PlanarGreen solve_planar_green(const PlanarDomain& dom, par::exec mode, double tol = 1e-12);

// 5-point Dirichlet energy of nodal data at n = 2: sum of squared differences
// over all lattice edges (the h factors cancel edge by edge). Exterior nodes
// participate with their data values, so functions that vanish there are
// measured as extended by zero.
double grid_energy(const PlanarDomain& dom, const std::vector<double>& full_values);

// ---------------------------------------------------------------------------
// level curves
// ---------------------------------------------------------------------------

struct Polyline {
    std::vector<std::array<double, 2>> pts;  // closed loop, last != first
};

// marching squares on the node values of G at level t > 0, oriented with
// {G > t} on the left (so loops around superlevel components run
// counterclockwise and shoelace areas come out positive)
std::vector<Polyline> level_curves(const PlanarGreen& pg, double t);

double polyline_area(const Polyline& loop);  // shoelace

// |{G > t}| and int_{{G > t}} |y - pole|^{-beta} dy via the stitched loops
// (the weighted version uses the exact per-edge polar reduction, so the
// weight singularity inside costs nothing)
double grid_level_volume(const PlanarGreen& pg, double t);
double grid_level_weighted_volume(const PlanarGreen& pg, double t, double beta);

// int_{{G = t}} |y - pole|^{-beta} |grad G|^{pw} dH by midpoint sums over the
// loop edges
double grid_level_surface_integral(const PlanarGreen& pg, double t, double beta, double pw);

}  // namespace smt
