#include "smt/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace smt::quad {

namespace {

// Legendre P_k(x) and derivative via the three-term recurrence
void legendre(int k, double x, double* p, double* dp) {
    double p0 = 1.0, p1 = x;
    if (k == 0) {
        *p = p0;
        *dp = 0.0;
        return;
    }
    for (int j = 2; j <= k; ++j) {
        double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / double(j);
        p0 = p1;
        p1 = p2;
    }
    *p = p1;
    *dp = double(k) * (x * p1 - p0) / (x * x - 1.0);
}

GaussRule build_rule(int order) {
    if (order < 1) throw range_error("gauss: order must be >= 1");
    GaussRule r;
    r.x.resize(order);
    r.w.resize(order);
    int half = (order + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Chebyshev-like initial guess, then Newton
        double x = std::cos(M_PI * (i + 0.75) / (order + 0.5));
        double p = 0.0, dp = 1.0;
        for (int it = 0; it < 100; ++it) {
            legendre(order, x, &p, &dp);
            double dx = p / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        legendre(order, x, &p, &dp);
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        r.x[i] = -x;
        r.w[i] = w;
        r.x[order - 1 - i] = x;
        r.w[order - 1 - i] = w;
    }
    if (order % 2 == 1) r.x[order / 2] = 0.0;
    return r;
}

}  // namespace

const GaussRule& gauss(int order) {
    static std::mutex mtx;
    static std::map<int, GaussRule> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(order);
    if (it == cache.end()) it = cache.emplace(order, build_rule(order)).first;
    return it->second;
}

}  // namespace smt::quad
