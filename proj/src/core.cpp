#include "smt/core.hpp"

#include <cmath>

namespace smt {

double ExponentConfig::q() const {
    return std::pow(omega, 1.0 / double(n - 1));
}

double gamma_half_integer(int twice_arg) {
    if (twice_arg <= 0) throw range_error("gamma_half_integer: argument must be positive");
    if (twice_arg == 1) return std::sqrt(M_PI);
    if (twice_arg == 2) return 1.0;
    double x = 0.5 * double(twice_arg - 2);
    return x * gamma_half_integer(twice_arg - 2);
}

double sphere_measure(int n) {
    if (n < 1) throw range_error("sphere_measure: n must be >= 1");
    return 2.0 * std::pow(M_PI, 0.5 * double(n)) / gamma_half_integer(n);
}

double critical_alpha_for(int n, double beta) {
    if (n < 2) throw range_error("critical_alpha_for: n must be >= 2");
    if (beta < 0.0 || beta >= double(n))
        throw range_error(strf("critical_alpha_for: beta = %g outside [0, n)", beta));
    double omega = sphere_measure(n);
    return (double(n) - beta) * std::pow(omega, 1.0 / double(n - 1));
}

ExponentConfig make_config(int n, double alpha, double beta) {
    if (n < 2) throw range_error("make_config: n must be >= 2");
    if (!(alpha > 0.0)) throw range_error("make_config: alpha must be positive");
    if (beta < 0.0 || beta >= double(n))
        throw range_error(strf("make_config: beta = %g outside [0, n)", beta));

    ExponentConfig cfg;
    cfg.n = n;
    cfg.alpha = alpha;
    cfg.beta = beta;
    cfg.omega = sphere_measure(n);
    cfg.alpha_n = double(n) * std::pow(cfg.omega, 1.0 / double(n - 1));
    cfg.alpha_nb = critical_alpha_for(n, beta);

    double load = alpha / cfg.alpha_n + beta / double(n);
    if (load > 1.0 + 1e-12)
        throw admissibility_error(
            strf("make_config: (alpha, beta) supercritical, alpha/alpha_n + beta/n = %.17g", load));
    return cfg;
}

bool is_critical(const ExponentConfig& cfg, double tol) {
    double load = cfg.alpha / cfg.alpha_n + cfg.beta / double(cfg.n);
    return std::abs(load - 1.0) <= tol;
}

double harmonic_number(int n_minus_1) {
    double h = 0.0;
    for (int j = 1; j <= n_minus_1; ++j) h += 1.0 / double(j);
    return h;
}

}  // namespace smt
