// Confidence intervals for sigma from the residual sum of squares, their
// monotone transformation into intervals for the test power, and the
// constrained minimum-length search over chi-square quantile positions.
//
// All intervals are open (strict inequalities), matching the construction's
// strict monotonicity; the boundary has measure zero.

#pragma once

#include "fpower/power.hpp"

namespace fpower::interval {

using power::NoncentralityMap;
using power::TestDesign;

// Interval (a, b) for sigma built from the observed residual sum of squares
// q ~ sigma^2 chi-square(v), with quantile positions A < B satisfying
// chisq_cdf(v, B) - chisq_cdf(v, A) = 1 - gamma, and a = sqrt(q/B),
// b = sqrt(q/A).
struct SigmaInterval {
    double a;
    double b;
    double A;
    double B;
    double gamma;
    double v;
    double q;
};

struct PowerInterval {
    double lo;
    double hi;
    double gamma;
};

// Equal-tail construction: A, B at the gamma/2 and 1-gamma/2 chi-square(v)
// quantiles.
SigmaInterval sigma_ci_equal_tail(double q, double v, double gamma);

// Same construction with the quantile positions supplied directly as
// probabilities (p_lo, p_lo + 1 - gamma); used by the min-length search.
SigmaInterval sigma_ci_at_position(double q, double v, double gamma, double t);

// Image of a sigma interval under the (strictly decreasing) power map:
// lo = power(b), hi = power(a).
PowerInterval power_ci(const SigmaInterval& interval, const TestDesign& design,
                       const NoncentralityMap& map);

struct MinLengthResult {
    double A;
    double B;
    SigmaInterval sigma;
    PowerInterval power;
    double length;             // power-interval length at the minimizer
    double equal_tail_length;  // length at t = gamma/2, for comparison
    // The minimizing positions depend on the observed q, so the nominal
    // 1-gamma coverage of the equal-tail construction is not established
    // for these intervals.
    bool coverage_not_established = true;
};

// Minimize the power-interval length over positions A = quantile(t),
// B = quantile(t + 1 - gamma), t in (0, gamma): 64-point coarse scan to
// seed, then golden-section to |dt| <= 1e-8. Rejects lambda_effect = 0
// (every feasible t gives length 0; the minimizer is undefined).
MinLengthResult minlen_positions(double q, double v, double gamma,
                                 const TestDesign& design,
                                 const NoncentralityMap& map);

}  // namespace fpower::interval
