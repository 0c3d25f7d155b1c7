// Monte Carlo engines: simulation oracles for the noncentral F CDF, direct
// simulation of the two-sided rejection rule, and coverage experiments for
// both interval constructions.
//
// Reproducible parallelism: replicates are partitioned into fixed-size
// blocks; each block's generator is derived from (seed, block index) (see
// rng.hpp), blocks may run on any number of worker threads, and results are
// reduced in block order. Output is bit-identical for any worker count.

#pragma once

#include <cstdint>

#include "fpower/interval.hpp"
#include "fpower/rng.hpp"

namespace fpower::mcsim {

enum class Rule { equal_tail, min_length };

struct SimConfig {
    std::uint64_t seed = 1;
    long replicates = 10000;
    int n = 10;
    double mu = 1.0;
    double mu0 = 0.0;
    double sigma = 1.0;
    double alpha = 0.05;
    double gamma = 0.05;
    Rule rule = Rule::equal_tail;
    int workers = 1;

    void validate() const;
};

struct CoverageReport {
    long hits = 0;
    long replicates = 0;
    double coverage = 0.0;
    double std_err = 0.0;
    double nominal = 0.0;
    Rule rule = Rule::equal_tail;
};

struct CoverageResult {
    CoverageReport sigma_interval;
    CoverageReport power_interval;
    long optimizer_failures = 0;       // min-length replicates that failed, counted not dropped
    long indicator_mismatches = 0;     // replicates where the two hit indicators differ
};

// Fraction of replicates with ((Z_1 + delta)^2 + Z_2^2 + ... + Z_u^2)/u
// <= x (V/v), V a sum of v squared standard normals. External oracle for
// dist::ncf_cdf; integer degrees of freedom only.
double mc_ncf_cdf(int u, int v, double delta, double x, long replicates,
                  std::uint64_t seed);

// Rejection frequency of the rule |Ybar - mu0| > S / sqrt(n-1) * sqrt(c)
// with S^2 = sum (Y_i - Ybar)^2 / n and c the 1-alpha central F(1, n-1)
// quantile.
double rejection_rate(const SimConfig& cfg);

// Per replicate: simulate the sample, build the sigma interval by the
// configured rule from q = sum (Y_i - Ybar)^2, transform it to a power
// interval, and record both coverage indicators. The min-length rule uses
// the true alternative's lambda_effect = sqrt(n)|mu - mu0| (fixed
// alternative) inside the optimizer.
CoverageResult coverage_experiment(const SimConfig& cfg);

}  // namespace fpower::mcsim
