#include "fpower/interval.hpp"

#include <cmath>

namespace fpower::interval {

namespace {

void check_ci_args(double q, double v, double gamma) {
    if (!(q > 0.0)) throw std::domain_error("sigma interval: q must be > 0");
    if (!(v > 0.0)) throw std::domain_error("sigma interval: v must be > 0");
    if (!(gamma > 0.0 && gamma < 1.0))
        throw std::domain_error("sigma interval: gamma must be in (0, 1)");
}

}  // namespace

SigmaInterval sigma_ci_at_position(double q, double v, double gamma, double t) {
    check_ci_args(q, v, gamma);
    if (!(t > 0.0 && t < gamma))
        throw std::domain_error("sigma_ci_at_position: t must be in (0, gamma)");
    const dist::ChiSquare chi(v);
    const double A = dist::chisq_quantile(chi, t);
    const double B = dist::chisq_quantile(chi, t + 1.0 - gamma);
    return SigmaInterval{std::sqrt(q / B), std::sqrt(q / A), A, B, gamma, v, q};
}

SigmaInterval sigma_ci_equal_tail(double q, double v, double gamma) {
    return sigma_ci_at_position(q, v, gamma, 0.5 * gamma);
}

PowerInterval power_ci(const SigmaInterval& interval, const TestDesign& design,
                       const NoncentralityMap& map) {
    // Power is decreasing in sigma, so the endpoints swap.
    return PowerInterval{power::power_at_sigma(design, map, interval.b),
                         power::power_at_sigma(design, map, interval.a),
                         interval.gamma};
}

namespace {

// Power-interval length at position t.
double length_at(double t, double q, double v, double gamma,
                 const TestDesign& design, const NoncentralityMap& map) {
    const auto si = sigma_ci_at_position(q, v, gamma, t);
    const auto pi = power_ci(si, design, map);
    return pi.hi - pi.lo;
}

}  // namespace

MinLengthResult minlen_positions(double q, double v, double gamma,
                                 const TestDesign& design,
                                 const NoncentralityMap& map) {
    check_ci_args(q, v, gamma);
    if (!(map.lambda_effect > 0.0))
        throw std::domain_error(
            "minlen_positions: degenerate map (lambda_effect = 0), length is "
            "identically zero");

    const auto L = [&](double t) { return length_at(t, q, v, gamma, design, map); };

    // Coarse 64-point scan; unimodality of L is not assumed.
    const double t_lo = gamma * 1e-6;
    const double t_hi = gamma * (1.0 - 1e-6);
    constexpr int kScanPoints = 64;
    double best_t = 0.5 * gamma;
    double best_L = L(best_t);
    for (int i = 0; i < kScanPoints; ++i) {
        const double t = t_lo + (t_hi - t_lo) * i / (kScanPoints - 1);
        const double val = L(t);
        if (val < best_L) {
            best_L = val;
            best_t = t;
        }
    }

    // Golden-section inside the bracket around the scan minimum.
    const double step = (t_hi - t_lo) / (kScanPoints - 1);
    double lo = std::max(t_lo, best_t - step);
    double hi = std::min(t_hi, best_t + step);
    constexpr double kInvPhi = 0.6180339887498949;
    double x1 = hi - kInvPhi * (hi - lo);
    double x2 = lo + kInvPhi * (hi - lo);
    double f1 = L(x1);
    double f2 = L(x2);
    int iter = 0;
    while (hi - lo > 1e-8) {
        if (++iter > 200)
            throw dist::convergence_error("minlen_positions: golden section stalled");
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - kInvPhi * (hi - lo);
            f1 = L(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + kInvPhi * (hi - lo);
            f2 = L(x2);
        }
    }
    double t_min = 0.5 * (lo + hi);
    if (L(t_min) > best_L) t_min = best_t;  // scan seed stays the fallback

    const auto si = sigma_ci_at_position(q, v, gamma, t_min);
    const auto pi = power_ci(si, design, map);
    const double equal_tail_L = L(0.5 * gamma);
    return MinLengthResult{si.A,          si.B, si, pi, pi.hi - pi.lo,
                           equal_tail_L,  true};
}

}  // namespace fpower::interval
