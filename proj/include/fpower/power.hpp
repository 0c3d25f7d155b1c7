// Power of the alpha-level F-test at fixed alternatives, the sigma ->
// delta(sigma) noncentrality maps (generic, two-way ANOVA interactions,
// two-sided t-test), and the plug-in power estimate at the MLE scale.

#pragma once

#include <cmath>
#include <vector>

#include "fpower/dist.hpp"

namespace fpower::power {

// An F-test: numerator/denominator degrees of freedom and level. The
// critical value c (the 1-alpha quantile of the central F) is fixed at
// construction.
struct TestDesign {
    double u;
    double v;
    double alpha;
    double critical_value;

    TestDesign(double u_, double v_, double alpha_)
        : u(u_), v(v_), alpha(alpha_),
          critical_value(dist::f_quantile_central(u_, v_, 1.0 - alpha_)) {
        if (!(u > 0.0) || !(v > 0.0))
            throw std::domain_error("TestDesign: degrees of freedom must be > 0");
        if (!(alpha > 0.0 && alpha < 1.0))
            throw std::domain_error("TestDesign: alpha must be in (0, 1)");
    }
};

// The strictly decreasing map sigma -> delta(sigma) = lambda_effect / sigma.
// lambda_effect carries the fixed alternative (same units as sigma);
// lambda_effect = 0 is the degenerate null alternative.
struct NoncentralityMap {
    double lambda_effect;

    explicit NoncentralityMap(double lambda_effect_) : lambda_effect(lambda_effect_) {
        if (!(lambda_effect >= 0.0))
            throw std::domain_error("NoncentralityMap: lambda_effect must be >= 0");
    }

    double delta(double sigma) const {
        if (!(sigma > 0.0))
            throw std::domain_error("NoncentralityMap: sigma must be > 0");
        return lambda_effect / sigma;
    }
};

// Two-way ANOVA with K observations per cell and the F-test that all
// interactions are zero. interaction_effects is I x J and must satisfy the
// usual side conditions (row and column sums zero, tolerance 1e-10).
struct AnovaInteractionSpec {
    int I;
    int J;
    int K;
    std::vector<std::vector<double>> interaction_effects;
};

struct AnovaDesign {
    NoncentralityMap map;
    double u;  // (I-1)(J-1)
    double v;  // (K-1)IJ
};

// Two-sided test of mu = mu0 from a normal sample of size n.
// Induced design: u = 1, v = n - 1, lambda_effect = sqrt(n)|mu - mu0|.
struct TwoSidedTSpec {
    int n;
    double mu0;
    double mu;

    TwoSidedTSpec(int n_, double mu0_, double mu_) : n(n_), mu0(mu0_), mu(mu_) {
        if (n < 2) throw std::domain_error("TwoSidedTSpec: n must be >= 2");
    }

    NoncentralityMap map() const {
        return NoncentralityMap(std::sqrt(static_cast<double>(n)) *
                                std::fabs(mu - mu0));
    }
};

// 1 - G_{u,v,delta}(c); equals alpha at delta = 0, strictly increasing in delta.
double power_at_delta(const TestDesign& design, double delta);

// Power at scale sigma through the map; strictly decreasing in sigma when
// lambda_effect > 0, constant alpha when lambda_effect = 0.
double power_at_sigma(const TestDesign& design, const NoncentralityMap& map,
                      double sigma);

// lambda_effect = sqrt(K sum_ij effects_ij^2), u = (I-1)(J-1), v = (K-1)IJ.
AnovaDesign anova_noncentrality(const AnovaInteractionSpec& spec);

// Exact power of the two-sided t-test at level alpha and true scale sigma.
double t_test_power(const TwoSidedTSpec& spec, double alpha, double sigma);

// Plug-in power estimate at the MLE scale s (divisor-n convention,
// S^2 = sum (Y_i - Ybar)^2 / n).
double power_mle(const TwoSidedTSpec& spec, double alpha, double s);

}  // namespace fpower::power
