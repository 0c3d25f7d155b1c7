#include "fpower/dist.hpp"

#include <cmath>
#include <functional>
#include <limits>

namespace fpower::dist {

namespace {

using specfun::log_bessel_i;
using specfun::log_gamma;
using specfun::reg_inc_beta;
using specfun::reg_inc_gamma_p;

constexpr double kSeriesTail = 1e-13;

// Bracket-then-bisection/secant hybrid for a monotone nondecreasing cdf.
// Converges on the probability scale: |cdf(x) - p| <= 1e-10.
double invert_monotone_cdf(const std::function<double(double)>& cdf, double p,
                           double hi_guess) {
    double lo = 0.0;
    double flo = 0.0;
    double hi = hi_guess > 0.0 ? hi_guess : 1.0;
    double fhi = cdf(hi);
    for (int i = 0; i < 300 && fhi < p; ++i) {
        lo = hi;
        flo = fhi;
        hi *= 2.0;
        fhi = cdf(hi);
    }
    if (fhi < p) throw convergence_error("quantile: failed to bracket");

    for (int iter = 0; iter < 200; ++iter) {
        double x;
        if (iter % 2 == 0 && fhi > flo) {
            x = lo + (p - flo) * (hi - lo) / (fhi - flo);  // secant step
            if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
        } else {
            x = 0.5 * (lo + hi);
        }
        const double fx = cdf(x);
        if (std::fabs(fx - p) <= 1e-10) return x;
        if (fx < p) {
            lo = x;
            flo = fx;
        } else {
            hi = x;
            fhi = fx;
        }
    }
    throw convergence_error("quantile: root finder did not converge");
}

// Poisson(lambda/2) mixture sum_k w_k g(k) for g nonincreasing in k with
// values in [0, 1]. Summation starts at the modal index and expands outward;
// each direction terminates once its term and its analytic geometric tail
// bound both fall below kSeriesTail.
double poisson_mixture(double lambda, const std::function<double(int)>& g,
                       int max_iter) {
    const double half = 0.5 * lambda;
    const int k_star = static_cast<int>(std::floor(half));
    const auto log_weight = [&](int k) {
        return k * std::log(half) - half - log_gamma(k + 1.0);
    };

    double sum = std::exp(log_weight(k_star)) * g(k_star);

    // Upward direction.
    double w = std::exp(log_weight(k_star));
    for (int k = k_star + 1; ; ++k) {
        if (k - k_star > max_iter)
            throw convergence_error("poisson_mixture: upward sum did not terminate");
        w *= half / k;
        const double gk = g(k);
        const double term = w * gk;
        sum += term;
        const double rho = half / (k + 1);
        if (rho < 1.0) {
            const double tail = w * rho / (1.0 - rho) * gk;  // g nonincreasing
            if (term < kSeriesTail && tail < kSeriesTail) break;
        }
    }

    // Downward direction (at most k_star terms).
    w = std::exp(log_weight(k_star));
    for (int k = k_star; k > 0; --k) {
        w *= k / half;
        const double term = w * g(k - 1);
        sum += term;
        const double rho = (k - 1) / half;
        if (rho < 1.0) {
            const double tail = w * rho / (1.0 - rho);  // g <= 1
            if (w < kSeriesTail && tail < kSeriesTail) break;
        }
    }
    return std::min(1.0, sum);
}

// Recursive adaptive Simpson; whole = S(a,b) precomputed.
double adaptive_simpson_step(const std::function<double(double)>& f, double a,
                             double b, double fa, double fm, double fb,
                             double whole, double eps, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (std::fabs(delta) <= 15.0 * eps) return left + right + delta / 15.0;
    if (depth <= 0)
        throw convergence_error("adaptive_simpson: subdivision cap reached");
    return adaptive_simpson_step(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1) +
           adaptive_simpson_step(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
}

// Interval halving until successive Simpson estimates differ by < eps;
// depth cap 20 (2^20 subintervals).
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double eps) {
    const double fa = f(a);
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    const double fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson_step(f, a, b, fa, fm, fb, whole, eps, 20);
}

}  // namespace

double chisq_cdf(const ChiSquare& d, double x) {
    if (!(x >= 0.0)) throw std::domain_error("chisq_cdf: x must be >= 0");
    return reg_inc_gamma_p(0.5 * d.df, 0.5 * x);
}

double chisq_pdf(const ChiSquare& d, double x) {
    if (!(x >= 0.0)) throw std::domain_error("chisq_pdf: x must be >= 0");
    const double s = 0.5 * d.df;
    if (x == 0.0) {
        if (d.df > 2.0) return 0.0;
        if (d.df == 2.0) return 0.5;
        return std::numeric_limits<double>::infinity();
    }
    return std::exp((s - 1.0) * std::log(x) - 0.5 * x - log_gamma(s) -
                    s * std::log(2.0));
}

double chisq_quantile(const ChiSquare& d, double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("chisq_quantile: p must be in (0, 1)");
    const double hi_guess = d.df + 10.0 * std::sqrt(2.0 * d.df) + 10.0;
    return invert_monotone_cdf([&](double x) { return chisq_cdf(d, x); }, p,
                               hi_guess);
}

double f_cdf_central(double df1, double df2, double x) {
    if (!(df1 > 0.0) || !(df2 > 0.0))
        throw std::domain_error("f_cdf_central: degrees of freedom must be > 0");
    if (!(x >= 0.0)) throw std::domain_error("f_cdf_central: x must be >= 0");
    if (x == 0.0) return 0.0;
    const double y = df1 * x / (df1 * x + df2);
    return reg_inc_beta(0.5 * df1, 0.5 * df2, y);
}

double f_quantile_central(double df1, double df2, double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("f_quantile_central: p must be in (0, 1)");
    return invert_monotone_cdf(
        [&](double x) { return f_cdf_central(df1, df2, x); }, p, 4.0);
}

double nc_chisq_cdf(const NoncentralChiSquare& d, double x) {
    if (!(x >= 0.0)) throw std::domain_error("nc_chisq_cdf: x must be >= 0");
    if (d.delta == 0.0) return chisq_cdf(ChiSquare(d.df), x);
    if (x == 0.0) return 0.0;
    const double lambda = d.delta * d.delta;  // the one delta -> lambda conversion
    return poisson_mixture(
        lambda,
        [&](int k) { return reg_inc_gamma_p(0.5 * d.df + k, 0.5 * x); }, 100000);
}

double nc_chisq_cdf_ruben(const NoncentralChiSquare& d, double r) {
    if (!(d.delta > 0.0))
        throw std::domain_error(
            "nc_chisq_cdf_ruben: delta must be > 0 (use the central branch)");
    if (!(r > 0.0)) throw std::domain_error("nc_chisq_cdf_ruben: r must be > 0");

    const double u = d.df;
    const double delta = d.delta;
    const double order = 0.5 * u - 1.0;
    const double log_pref = (1.0 - 0.5 * u) * std::log(delta) - 0.5 * delta * delta;

    const auto integrand = [&](double x) {
        return std::exp(log_pref + 0.5 * u * std::log(x) - 0.5 * x * x +
                        log_bessel_i(order, delta * x));
    };

    // Near the origin the integrand behaves like c0 * x^{u-1}; integrate
    // [0, eps] analytically from the leading Bessel term so the quadrature
    // never touches the (removable or integrable) endpoint singularity.
    const double eps = std::min(0.5 * r, 1e-4 / std::max(1.0, delta));
    const double c0 =
        std::exp((1.0 - 0.5 * u) * std::log(2.0) - 0.5 * delta * delta -
                 log_gamma(0.5 * u));
    const double head = c0 * std::pow(eps, u) / u;
    return std::min(1.0, head + adaptive_simpson(integrand, eps, r, 1e-10));
}

double nc_chisq_cdf_ddelta(const NoncentralChiSquare& d, double r) {
    if (!(d.delta > 0.0))
        throw std::domain_error("nc_chisq_cdf_ddelta: delta must be > 0");
    if (!(r > 0.0)) throw std::domain_error("nc_chisq_cdf_ddelta: r must be > 0");
    const double u = d.df;
    const double delta = d.delta;
    return -std::exp(0.5 * u * std::log(r) + (1.0 - 0.5 * u) * std::log(delta) -
                     0.5 * (r * r + delta * delta) +
                     log_bessel_i(0.5 * u, r * delta));
}

double ncf_cdf(const NoncentralF& d, double x) {
    if (!(x >= 0.0)) throw std::domain_error("ncf_cdf: x must be >= 0");
    if (d.delta == 0.0) return f_cdf_central(d.df1, d.df2, x);
    if (x == 0.0) return 0.0;
    const double y = d.df1 * x / (d.df1 * x + d.df2);
    const double lambda = d.delta * d.delta;
    return poisson_mixture(
        lambda,
        [&](int k) { return reg_inc_beta(0.5 * d.df1 + k, 0.5 * d.df2, y); },
        100000);
}

double ncf_cdf_by_expectation(const NoncentralF& d, double x, int nodes) {
    if (!(x >= 0.0))
        throw std::domain_error("ncf_cdf_by_expectation: x must be >= 0");
    if (nodes < 16)
        throw std::domain_error("ncf_cdf_by_expectation: nodes must be >= 16");
    if (x == 0.0) return 0.0;

    const double v = d.df2;
    const ChiSquare vdist(v);
    const NoncentralChiSquare num(d.df1, d.delta);

    // Integration range covering >= 1 - 1e-12 of the chi-square(v) mass.
    // Lower cutoff from the bound P(s, y) <~ y^s / Gamma(s+1); upper cutoff
    // sits more than 14 standard deviations into the tail.
    const double s = 0.5 * v;
    const double lo =
        2.0 * std::exp((std::log(1e-14) + log_gamma(s + 1.0)) / s);
    const double hi = v + 20.0 * std::sqrt(2.0 * v) + 60.0;

    const auto g = [&](double w) {
        return nc_chisq_cdf(num, x * d.df1 * w / v) * chisq_pdf(vdist, w);
    };

    // Composite Simpson; double the panel count until successive estimates
    // agree to 1e-9.
    int panels = nodes;
    double prev = std::numeric_limits<double>::quiet_NaN();
    for (int round = 0; round < 12; ++round) {
        const double h = (hi - lo) / panels;
        double acc = g(lo) + g(hi);
        for (int i = 1; i < panels; ++i)
            acc += (i % 2 == 1 ? 4.0 : 2.0) * g(lo + i * h);
        const double est = acc * h / 3.0;
        if (round > 0 && std::fabs(est - prev) < 1e-9) return std::min(1.0, est);
        prev = est;
        panels *= 2;
    }
    throw convergence_error("ncf_cdf_by_expectation: quadrature did not converge");
}

}  // namespace fpower::dist
