// Central and noncentral chi-square and F distributions: CDFs, quantiles,
// the Bessel-integral form of the noncentral chi-square CDF (used as an
// independent cross-check of the series evaluator), and the closed-form
// derivative of that CDF in the noncentrality parameter.
//
// Noncentrality convention: all types store the distance-scale parameter
// delta; the conventional sum-of-squares noncentrality is lambda = delta^2
// and is formed exactly once, inside the two mixture-series evaluators.

#pragma once

#include "fpower/specfun.hpp"

namespace fpower::dist {

using specfun::Accuracy;
using specfun::convergence_error;

struct ChiSquare {
    double df;

    explicit ChiSquare(double df_) : df(df_) {
        if (!(df > 0.0)) throw std::domain_error("ChiSquare: df must be > 0");
    }
};

struct NoncentralChiSquare {
    double df;
    double delta;  // distance scale; lambda = delta^2

    NoncentralChiSquare(double df_, double delta_) : df(df_), delta(delta_) {
        if (!(df > 0.0)) throw std::domain_error("NoncentralChiSquare: df must be > 0");
        if (!(delta >= 0.0)) throw std::domain_error("NoncentralChiSquare: delta must be >= 0");
    }
};

struct NoncentralF {
    double df1;
    double df2;
    double delta;  // distance scale; lambda = delta^2

    NoncentralF(double df1_, double df2_, double delta_)
        : df1(df1_), df2(df2_), delta(delta_) {
        if (!(df1 > 0.0) || !(df2 > 0.0))
            throw std::domain_error("NoncentralF: degrees of freedom must be > 0");
        if (!(delta >= 0.0)) throw std::domain_error("NoncentralF: delta must be >= 0");
    }
};

double chisq_cdf(const ChiSquare& d, double x);
double chisq_pdf(const ChiSquare& d, double x);

// Inverse of chisq_cdf; converges on the probability scale,
// |cdf(x) - p| <= 1e-10.
double chisq_quantile(const ChiSquare& d, double p);

double f_cdf_central(double df1, double df2, double x);
double f_quantile_central(double df1, double df2, double p);

// Primary noncentral chi-square CDF: Poisson mixture of central chi-square
// CDFs, summed outward from the modal Poisson index with analytic tail
// bounds (both directions truncated below 1e-13).
double nc_chisq_cdf(const NoncentralChiSquare& d, double x);

// Independent cross-check of nc_chisq_cdf at argument x = r^2: adaptive
// Simpson quadrature of the Bessel-integral representation
//   delta^{1-u/2} e^{-delta^2/2} int_0^r x^{u/2} e^{-x^2/2} I_{u/2-1}(delta x) dx
// with the integrand assembled in log space per node. Requires delta > 0;
// the delta = 0 parameterization has a removable singularity and callers
// must use the central branch instead.
double nc_chisq_cdf_ruben(const NoncentralChiSquare& d, double r);

// Closed-form d/d delta of the noncentral chi-square CDF at x = r^2:
//   -r^{u/2} delta^{1-u/2} e^{-(r^2+delta^2)/2} I_{u/2}(r delta)
// Strictly negative for r * delta > 0.
double nc_chisq_cdf_ddelta(const NoncentralChiSquare& d, double r);

// Primary noncentral F CDF: Poisson mixture of incomplete-beta terms,
// same truncation policy as nc_chisq_cdf.
double ncf_cdf(const NoncentralF& d, double x);

// Cross-check of ncf_cdf through the expectation identity
// G(x) = E[F_{u,delta}(x u V / v)] with V ~ chi-square(df2): quadrature of
// nc_chisq_cdf against the chi-square density over a range covering at
// least 1 - 1e-12 of V's mass. `nodes` is the initial panel count (>= 16);
// panels are doubled until successive estimates agree.
double ncf_cdf_by_expectation(const NoncentralF& d, double x, int nodes);

}  // namespace fpower::dist
