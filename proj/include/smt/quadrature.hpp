#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "smt/common.hpp"

namespace smt::quad {

// Gauss-Legendre rule on [-1, 1]; nodes/weights computed once per order by
// Newton iteration on the Legendre polynomial (no transcribed tables).
struct GaussRule {
    std::vector<double> x;
    std::vector<double> w;
};

const GaussRule& gauss(int order);

// fixed-order integration of f over [a, b]
template <class F>
double gauss_interval(const GaussRule& rule, double a, double b, F&& f) {
    double mid = 0.5 * (a + b);
    double half = 0.5 * (b - a);
    double s = 0.0;
    for (std::size_t i = 0; i < rule.x.size(); ++i) s += rule.w[i] * f(mid + half * rule.x[i]);
    return s * half;
}

// adaptive: accept a panel when GL15 on it agrees with GL15 on its halves
template <class F>
double adaptive_panel(const GaussRule& rule, double a, double b, F&& f, double whole,
                      double abs_tol, double rel_tol, int depth) {
    double m = 0.5 * (a + b);
    double left = gauss_interval(rule, a, m, f);
    double right = gauss_interval(rule, m, b, f);
    double fine = left + right;
    double err = std::abs(fine - whole);
    if (depth <= 0 || err <= abs_tol + rel_tol * std::abs(fine)) return fine;
    return adaptive_panel(rule, a, m, f, left, 0.5 * abs_tol, rel_tol, depth - 1) +
           adaptive_panel(rule, m, b, f, right, 0.5 * abs_tol, rel_tol, depth - 1);
}

template <class F>
double adaptive(double a, double b, F&& f, double abs_tol = 1e-13, double rel_tol = 1e-12,
                int max_depth = 32) {
    if (a == b) return 0.0;
    const GaussRule& rule = gauss(15);
    double whole = gauss_interval(rule, a, b, f);
    return adaptive_panel(rule, a, b, f, whole, abs_tol, rel_tol, max_depth);
}

}  // namespace smt::quad
