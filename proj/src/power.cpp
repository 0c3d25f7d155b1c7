#include "fpower/power.hpp"

#include <cmath>

namespace fpower::power {

double power_at_delta(const TestDesign& design, double delta) {
    if (!(delta >= 0.0)) throw std::domain_error("power_at_delta: delta must be >= 0");
    return 1.0 - dist::ncf_cdf(dist::NoncentralF(design.u, design.v, delta),
                               design.critical_value);
}

double power_at_sigma(const TestDesign& design, const NoncentralityMap& map,
                      double sigma) {
    return power_at_delta(design, map.delta(sigma));
}

AnovaDesign anova_noncentrality(const AnovaInteractionSpec& spec) {
    if (spec.I < 2 || spec.J < 2 || spec.K < 2)
        throw std::domain_error("anova_noncentrality: I, J, K must be >= 2");
    if (static_cast<int>(spec.interaction_effects.size()) != spec.I)
        throw std::domain_error("anova_noncentrality: effects matrix must be I x J");
    for (const auto& row : spec.interaction_effects)
        if (static_cast<int>(row.size()) != spec.J)
            throw std::domain_error("anova_noncentrality: effects matrix must be I x J");

    // Side conditions: every row sum and column sum zero within 1e-10.
    constexpr double kSideTol = 1e-10;
    for (int i = 0; i < spec.I; ++i) {
        double rs = 0.0;
        for (int j = 0; j < spec.J; ++j) rs += spec.interaction_effects[i][j];
        if (std::fabs(rs) > kSideTol)
            throw std::domain_error("anova_noncentrality: row sums must be zero");
    }
    for (int j = 0; j < spec.J; ++j) {
        double cs = 0.0;
        for (int i = 0; i < spec.I; ++i) cs += spec.interaction_effects[i][j];
        if (std::fabs(cs) > kSideTol)
            throw std::domain_error("anova_noncentrality: column sums must be zero");
    }

    double sumsq = 0.0;
    for (const auto& row : spec.interaction_effects)
        for (double e : row) sumsq += e * e;

    return AnovaDesign{
        NoncentralityMap(std::sqrt(spec.K * sumsq)),
        static_cast<double>((spec.I - 1) * (spec.J - 1)),
        static_cast<double>((spec.K - 1) * spec.I * spec.J)};
}

double t_test_power(const TwoSidedTSpec& spec, double alpha, double sigma) {
    const TestDesign design(1.0, spec.n - 1.0, alpha);
    return power_at_sigma(design, spec.map(), sigma);
}

double power_mle(const TwoSidedTSpec& spec, double alpha, double s) {
    if (!(s > 0.0)) throw std::domain_error("power_mle: s must be > 0");
    return t_test_power(spec, alpha, s);
}

}  // namespace fpower::power
