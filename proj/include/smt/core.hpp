#pragma once

#include "smt/common.hpp"

namespace smt {

// Exponent bookkeeping for the weighted exponential functional
//   F(u) = int_Omega (e^{alpha |u|^{n/(n-1)}} - 1) |x|^{-beta} dx.
// The pair (alpha, beta) is admissible iff alpha/alpha_n + beta/n <= 1 and
// critical iff equality holds; alpha_n = n * omega^{1/(n-1)} with omega the
// surface measure of the unit sphere S^{n-1}.
struct ExponentConfig {
    int n = 2;           // ambient dimension, n >= 2
    double alpha = 0.0;  // exponential strength, > 0
    double beta = 0.0;   // weight exponent, 0 <= beta < n
    double omega = 0.0;  // |S^{n-1}|
    double alpha_n = 0.0;
    double alpha_nb = 0.0;  // (n - beta) * omega^{1/(n-1)}

    double p() const { return double(n) / double(n - 1); }
    // omega^{1/(n-1)}, the constant in front of -log|x| in the Green function
    double q() const;
};

// Gamma(k/2) for positive integer k, by the half-integer recursion
// Gamma(x+1) = x Gamma(x) down to Gamma(1/2) = sqrt(pi) or Gamma(1) = 1.
double gamma_half_integer(int twice_arg);

// |S^{n-1}| = 2 pi^{n/2} / Gamma(n/2)
double sphere_measure(int n);

// borderline strength at this beta: alpha_{n,beta} = (n - beta) omega^{1/(n-1)}
double critical_alpha_for(int n, double beta);

// validates and fills the derived constants; throws admissibility_error for
// supercritical pairs and range_error for out-of-range n, alpha, beta
ExponentConfig make_config(int n, double alpha, double beta);

// |alpha/alpha_n + beta/n - 1| <= tol
bool is_critical(const ExponentConfig& cfg, double tol = 1e-12);

// sum_{j=1}^{n-1} 1/j, the exponent in the closed-form concentration level
double harmonic_number(int n_minus_1);

}  // namespace smt
