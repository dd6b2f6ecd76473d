#pragma once

#include <array>
#include <vector>

#include "smt/core.hpp"
#include "smt/interp.hpp"
#include "smt/parallel.hpp"

namespace smt {

// ---------------------------------------------------------------------------
// closed-form n-Green function of a ball
// ---------------------------------------------------------------------------

// G for the n-Laplacian on the ball of radius R centered at the origin with
// pole x0 strictly inside:
//   G(y) = -c log|y - x0| + c log(|x0| |y - x0*| / R),   x0* = R^2 x0 / |x0|^2,
// c = omega^{-1/(n-1)}. Everything is axisymmetric about the pole axis, so
// points are handled in the 2-plane spanned by that axis: coordinate y1 along
// x0, y2 perpendicular. This covers every dimension n >= 2 with 2d arithmetic.
struct BallGreen {
    int n = 2;
    double R = 1.0;
    double d = 0.0;  // |x0|, pole at (d, 0) in plane coordinates

    double q() const;  // omega^{1/(n-1)}
    double c() const { return 1.0 / q(); }
    // conformal incenter: near the pole G = -c log rho + c log I + o(1)
    double I() const { return (R * R - d * d) / R; }

    double value(double y1, double y2) const;
    void gradient(double y1, double y2, double* g1, double* g2) const;

    // same quantities with p = y - pole; near the pole these avoid the
    // cancellation of forming y = pole + p and subtracting the pole again
    double value_rel(double p1, double p2) const;
    void gradient_rel(double p1, double p2, double* g1, double* g2) const;
};

BallGreen make_ball_green(int n, double R, double pole_offset);

// ---------------------------------------------------------------------------
// ray fans around the pole
// ---------------------------------------------------------------------------

// Angular quadrature for integrals over directions from the pole. For n = 2
// the full circle with the trapezoid rule (spectral on periodic analytic
// data); for n >= 3 Gauss-Legendre in mu = cos(phi) with the surface factor
// omega_{n-2} (1-mu^2)^{(n-3)/2} folded into the weights, phi in (0, pi).
struct RayFan {
    std::vector<double> phi;
    std::vector<double> weight;  // sums to omega_{n-1}
};

RayFan make_fan(int n, int rays);

// distance from the pole to the sphere |y| = R in direction phi
double boundary_radius(const BallGreen& g, double phi);

// distance from the pole to the level set {G = t} in direction phi
// (Newton in s = -log rho with a bisection bracket; t > 0)
double level_radius(const BallGreen& g, double t, double phi);

// d rho / d phi on the level set, from the implicit function theorem
double level_radius_derivative(const BallGreen& g, double t, double phi, double rho);

// ---------------------------------------------------------------------------
// level-set functionals
// ---------------------------------------------------------------------------

// int_{{G < t}} |grad G|^n dy; equals t exactly in the continuum
double sublevel_flow_integral(const BallGreen& g, double t, const RayFan& fan, par::exec mode);

// int_{{G = t}} |y - pole|^{-beta} |grad G|^{pw} dH^{n-1}; beta = 0, pw = n-1
// recovers the unit flux identity
double level_surface_integral(const BallGreen& g, double t, double beta, double pw,
                              const RayFan& fan, par::exec mode);

// |{G > t}| and int_{{G > t}} |y - pole|^{-beta} dy (exact radial
// antiderivative per ray, so the weight singularity costs nothing)
double superlevel_volume(const BallGreen& g, double t, const RayFan& fan, par::exec mode);
double superlevel_weighted_volume(const BallGreen& g, double beta, double t, const RayFan& fan,
                                  par::exec mode);

// enclosure B_{tau-sigma}(pole) subset {G > t} subset B_{tau+sigma}(pole):
// tau = I e^{-qt}, sigma from the fan extremes with a relative inflation;
// throws certificate_error if the fan does not actually satisfy it
struct LevelEnclosure {
    double t = 0.0, tau = 0.0, sigma = 0.0;
};
LevelEnclosure level_enclosure(const BallGreen& g, double t, const RayFan& fan);

// ---------------------------------------------------------------------------
// cached level data in log coordinates
// ---------------------------------------------------------------------------

// Level-set scalars as splines in s = q t with the leading exponential
// factored out, so every stored quantity is O(1) and the cache extends to
// arbitrarily deep levels (the ratios freeze at their limit 1 beyond s_cap).
//   w_ratio(s)  = W(t)   e^{(n-b)s} / (q omega I^{n-b}),  W = int |y|^-b /|dG| dH
//   v_ratio(s)  = V_b(t) (n-b) e^{(n-b)s} / (omega I^{n-b})
//   b_ratio(s)  = int_{G=t} |grad G|^{n-1} dH            (identically 1)
//   vol_ratio(s)= |{G>t}| n e^{ns} / (omega I^n)
// The weighted isoperimetric chain is exactly w_ratio >= 1 with equality only
// for the centered pole.
struct GreenLevelData {
    int n = 2;
    double beta = 0.0, I = 1.0, q = 0.0, omega = 0.0;
    double s_cap = 0.0;
    CubicSpline w_ratio, v_ratio, b_ratio, vol_ratio;

    double w_at(double s) const { return w_ratio(s); }
    double v_at(double s) const { return v_ratio(s); }
    double b_at(double s) const { return b_ratio(s); }
    double vol_at(double s) const { return vol_ratio(s); }

    // actual |{G > t}| at s = qt, usable while e^{-ns} stays normal
    double volume_of_s(double s) const;
};

GreenLevelData make_level_data(const BallGreen& g, double beta, int rays, int s_nodes = 257,
                               double s_cap = 34.0, par::exec mode = par::exec::openmp);

// ---------------------------------------------------------------------------
// polygons and the weighted isoperimetric bound
// ---------------------------------------------------------------------------

struct Polygon {
    std::vector<std::array<double, 2>> pts;  // counterclockwise, origin inside
};

// int_P |y|^{-beta} dy by the per-edge polar reduction (exact in the radial
// direction, adaptive along each edge); beta = 0 is the shoelace area
double polygon_weighted_area(const Polygon& poly, double beta);

// oint_{dP} |y|^{-e} dH^1
double polygon_weighted_perimeter(const Polygon& poly, double e);

// upper bound on the weighted area of a planar set in terms of its weighted
// perimeter: A <= P^{n/(n-1)} / alpha_{n,beta} with P = oint |y|^{-(n-1)b/n};
// equality for balls centered at the weight origin
double alvino_area_bound(double weighted_perimeter, int n, double beta);

}  // namespace smt
