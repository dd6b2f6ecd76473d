#pragma once

#include <cstddef>
#include <vector>

#include "smt/common.hpp"

namespace smt {

// Natural cubic spline through (x_i, y_i), x strictly increasing. Evaluation
// outside [x_front, x_back] clamps to the endpoint value; the level-set data
// cached with these splines is constant beyond the tabulated range by design,
// so clamping is the intended extension, not a fallback.
struct CubicSpline {
    std::vector<double> x, y, m;  // m = second derivatives at the knots

    double operator()(double t) const;
};

CubicSpline make_spline(std::vector<double> x, std::vector<double> y);

}  // namespace smt
