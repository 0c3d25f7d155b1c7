#include "fpower/mcsim.hpp"

#include <atomic>
#include <cmath>
#include <thread>
#include <vector>

namespace fpower::mcsim {

namespace {

constexpr long kBlockSize = 4096;

// Run `fn(block_index, rng, count)` over all blocks on `workers` threads and
// return the per-block results indexed by block; callers reduce in block
// order so the outcome is independent of the worker count.
template <typename Result, typename Fn>
std::vector<Result> run_blocks(std::uint64_t seed, long replicates, int workers,
                               Fn fn) {
    const long n_blocks = (replicates + kBlockSize - 1) / kBlockSize;
    std::vector<Result> results(n_blocks);
    std::atomic<long> next{0};
    const auto worker = [&] {
        for (;;) {
            const long b = next.fetch_add(1);
            if (b >= n_blocks) return;
            const long count =
                std::min(kBlockSize, replicates - b * kBlockSize);
            Rng rng = Rng::for_block(seed, static_cast<std::uint64_t>(b));
            results[b] = fn(b, rng, count);
        }
    };
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    return results;
}

struct SampleStats {
    double ybar;
    double q;  // sum (Y_i - Ybar)^2
};

SampleStats draw_sample(Rng& rng, int n, double mu, double sigma) {
    // Two-pass would need storage; use the shifted one-pass identity
    // q = sum y_i^2 - n ybar^2 on centered draws for stability.
    double sum = 0.0, sumsq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double z = rng.next_normal();  // centered: y_i = mu + sigma z
        sum += z;
        sumsq += z * z;
    }
    const double zbar = sum / n;
    const double q = sigma * sigma * (sumsq - n * zbar * zbar);
    return SampleStats{mu + sigma * zbar, q};
}

}  // namespace

double normal_sample(Rng& rng, double mu, double sigma) {
    if (!(sigma > 0.0)) throw std::domain_error("normal_sample: sigma must be > 0");
    return mu + sigma * rng.next_normal();
}

void SimConfig::validate() const {
    if (replicates < 1) throw std::domain_error("SimConfig: replicates must be >= 1");
    if (n < 2) throw std::domain_error("SimConfig: n must be >= 2");
    if (!(sigma > 0.0)) throw std::domain_error("SimConfig: sigma must be > 0");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::domain_error("SimConfig: alpha must be in (0, 1)");
    if (!(gamma > 0.0 && gamma < 1.0))
        throw std::domain_error("SimConfig: gamma must be in (0, 1)");
    if (workers < 1) throw std::domain_error("SimConfig: workers must be >= 1");
}

double mc_ncf_cdf(int u, int v, double delta, double x, long replicates,
                  std::uint64_t seed) {
    if (u < 1 || v < 1)
        throw std::domain_error(
            "mc_ncf_cdf: integer degrees of freedom >= 1 required (oracle "
            "limitation)");
    if (!(delta >= 0.0)) throw std::domain_error("mc_ncf_cdf: delta must be >= 0");
    if (replicates < 10000)
        throw std::domain_error("mc_ncf_cdf: replicates must be >= 10^4");

    const auto block = [&](long, Rng& rng, long count) {
        long hits = 0;
        for (long i = 0; i < count; ++i) {
            double numer = 0.0;
            {
                const double z = rng.next_normal() + delta;
                numer += z * z;
            }
            for (int j = 1; j < u; ++j) {
                const double z = rng.next_normal();
                numer += z * z;
            }
            double denom = 0.0;
            for (int j = 0; j < v; ++j) {
                const double z = rng.next_normal();
                denom += z * z;
            }
            if (numer / u <= x * (denom / v)) ++hits;
        }
        return hits;
    };

    long total = 0;
    for (long h : run_blocks<long>(seed, replicates, 1, block)) total += h;
    return static_cast<double>(total) / static_cast<double>(replicates);
}

double rejection_rate(const SimConfig& cfg) {
    cfg.validate();
    const double c = dist::f_quantile_central(1.0, cfg.n - 1.0, 1.0 - cfg.alpha);
    const double crit_factor = std::sqrt(c) / std::sqrt(cfg.n - 1.0);

    const auto block = [&](long, Rng& rng, long count) {
        long rejects = 0;
        for (long i = 0; i < count; ++i) {
            const auto st = draw_sample(rng, cfg.n, cfg.mu, cfg.sigma);
            const double s = std::sqrt(st.q / cfg.n);  // divisor-n S
            if (std::fabs(st.ybar - cfg.mu0) > s * crit_factor) ++rejects;
        }
        return rejects;
    };

    long total = 0;
    for (long r : run_blocks<long>(cfg.seed, cfg.replicates, cfg.workers, block))
        total += r;
    return static_cast<double>(total) / static_cast<double>(cfg.replicates);
}

namespace {

struct CoverageBlock {
    long sigma_hits = 0;
    long power_hits = 0;
    long failures = 0;
    long mismatches = 0;
    long done = 0;
};

}  // namespace

CoverageResult coverage_experiment(const SimConfig& cfg) {
    cfg.validate();
    if (cfg.rule == Rule::min_length && cfg.mu == cfg.mu0)
        throw std::domain_error(
            "coverage_experiment: min_length requires mu != mu0");

    const double v = cfg.n - 1.0;
    const power::TestDesign design(1.0, v, cfg.alpha);
    const power::NoncentralityMap map(std::sqrt(static_cast<double>(cfg.n)) *
                               std::fabs(cfg.mu - cfg.mu0));
    const double omega_true = power::power_at_sigma(design, map, cfg.sigma);

    // Equal-tail quantile positions do not depend on the data.
    const dist::ChiSquare chi(v);
    const double A_eq = dist::chisq_quantile(chi, 0.5 * cfg.gamma);
    const double B_eq = dist::chisq_quantile(chi, 1.0 - 0.5 * cfg.gamma);

    const auto block = [&](long, Rng& rng, long count) {
        CoverageBlock out;
        for (long i = 0; i < count; ++i) {
            const auto st = draw_sample(rng, cfg.n, cfg.mu, cfg.sigma);
            if (!(st.q > 0.0)) {
                ++out.failures;
                continue;
            }
            interval::SigmaInterval si;
            interval::PowerInterval pi;
            if (cfg.rule == Rule::equal_tail) {
                si = interval::SigmaInterval{std::sqrt(st.q / B_eq),
                                             std::sqrt(st.q / A_eq),
                                             A_eq, B_eq, cfg.gamma, v, st.q};
                pi = interval::power_ci(si, design, map);
            } else {
                try {
                    const auto res =
                        interval::minlen_positions(st.q, v, cfg.gamma, design, map);
                    si = res.sigma;
                    pi = res.power;
                } catch (const std::exception&) {
                    ++out.failures;
                    continue;
                }
            }
            const bool sigma_hit = si.a < cfg.sigma && cfg.sigma < si.b;
            const bool power_hit = pi.lo < omega_true && omega_true < pi.hi;
            out.sigma_hits += sigma_hit ? 1 : 0;
            out.power_hits += power_hit ? 1 : 0;
            out.mismatches += (sigma_hit != power_hit) ? 1 : 0;
            ++out.done;
        }
        return out;
    };

    CoverageBlock total;
    for (const auto& b :
         run_blocks<CoverageBlock>(cfg.seed, cfg.replicates, cfg.workers, block)) {
        total.sigma_hits += b.sigma_hits;
        total.power_hits += b.power_hits;
        total.failures += b.failures;
        total.mismatches += b.mismatches;
        total.done += b.done;
    }

    const auto make_report = [&](long hits) {
        CoverageReport r;
        r.hits = hits;
        r.replicates = total.done;
        r.coverage = total.done > 0 ? static_cast<double>(hits) / total.done : 0.0;
        r.std_err = total.done > 0
                        ? std::sqrt(r.coverage * (1.0 - r.coverage) / total.done)
                        : 0.0;
        r.nominal = 1.0 - cfg.gamma;
        r.rule = cfg.rule;
        return r;
    };

    return CoverageResult{make_report(total.sigma_hits),
                          make_report(total.power_hits), total.failures,
                          total.mismatches};
}

}  // namespace fpower::mcsim
