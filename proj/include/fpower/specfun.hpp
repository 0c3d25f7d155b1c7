// Special-function kernels: log-gamma, regularized incomplete gamma/beta,
// and the log-scaled modified Bessel function of the first kind.
//
// Everything here is self-contained (no external math library) and pure;
// all functions are safe to call concurrently.

#pragma once

#include <stdexcept>

namespace fpower::specfun {

// Thrown when an iterative evaluation fails to reach its tolerance within
// the allowed iteration budget. Never silently truncated: downstream CDF
// accuracy guarantees depend on these kernels converging.
struct convergence_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Convergence knobs shared by the iterative kernels.
struct Accuracy {
    double abs_tol = 1e-15;  // must be >= 1e-15
    int max_iter = 10000;    // must be >= 1

    void validate() const;
};

// ln Gamma(x) for x > 0 (Lanczos approximation, g=7, 9 terms).
double log_gamma(double x);

// Regularized lower incomplete gamma P(s, x) = gamma(s,x)/Gamma(s).
// Series branch for x < s+1, continued fraction otherwise.
double reg_inc_gamma_p(double s, double x, const Accuracy& acc = {});

// Regularized upper incomplete gamma Q(s, x) = 1 - P(s, x), computed
// directly on the branch where P would lose precision.
double reg_inc_gamma_q(double s, double x, const Accuracy& acc = {});

// Regularized incomplete beta I_x(a, b) via Lentz continued fraction,
// with the symmetry switch at x = (a+1)/(a+b+2).
double reg_inc_beta(double a, double b, double x, const Accuracy& acc = {});

// ln I_order(z) for order >= -1/2, z >= 0, evaluated in log space so that
// arguments up to ~1e5 do not overflow.
//
// z = 0 conventions: returns 0 for order = 0 (I_0(0) = 1), -infinity for
// order > 0 (I_v(0) = 0), and +infinity for -1/2 <= order < 0 (I_v diverges
// at the origin for negative non-integer order).
//
// Branches: closed forms at order = +/-1/2, ascending series (summed with
// log-add, no overflow) for z <= 30 + order^2, large-argument asymptotic
// expansion beyond.
double log_bessel_i(double order, double z, const Accuracy& acc = {});

}  // namespace fpower::specfun
