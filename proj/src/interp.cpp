#include "smt/interp.hpp"

#include <algorithm>
#include <cmath>

namespace smt {

CubicSpline make_spline(std::vector<double> x, std::vector<double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw range_error("make_spline: need matching arrays with >= 2 points");
    for (std::size_t i = 0; i + 1 < x.size(); ++i)
        if (!(x[i] < x[i + 1])) throw range_error("make_spline: x not strictly increasing");

    std::size_t n = x.size();
    CubicSpline s;
    s.x = std::move(x);
    s.y = std::move(y);
    s.m.assign(n, 0.0);
    if (n == 2) return s;  // natural ends: straight line

    // Thomas solve of the tridiagonal system for interior second derivatives
    std::vector<double> diag(n, 0.0), rhs(n, 0.0), upper(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        double hl = s.x[i] - s.x[i - 1];
        double hr = s.x[i + 1] - s.x[i];
        diag[i] = 2.0 * (hl + hr);
        upper[i] = hr;
        rhs[i] = 6.0 * ((s.y[i + 1] - s.y[i]) / hr - (s.y[i] - s.y[i - 1]) / hl);
    }
    for (std::size_t i = 2; i + 1 < n; ++i) {
        double hl = s.x[i] - s.x[i - 1];  // sub-diagonal entry
        double w = hl / diag[i - 1];
        diag[i] -= w * upper[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    for (std::size_t i = n - 2; i >= 1; --i) {
        s.m[i] = (rhs[i] - upper[i] * s.m[i + 1]) / diag[i];
        if (i == 1) break;
    }
    return s;
}

double CubicSpline::operator()(double t) const {
    if (t <= x.front()) return y.front();
    if (t >= x.back()) return y.back();
    auto it = std::upper_bound(x.begin(), x.end(), t);
    std::size_t k = static_cast<std::size_t>(it - x.begin());  // t in (x[k-1], x[k]]
    double h = x[k] - x[k - 1];
    double a = (x[k] - t) / h;
    double b = (t - x[k - 1]) / h;
    return a * y[k - 1] + b * y[k] +
           ((a * a * a - a) * m[k - 1] + (b * b * b - b) * m[k]) * h * h / 6.0;
}

}  // namespace smt
