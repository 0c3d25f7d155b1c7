// fpower: power of F-tests at fixed alternatives and confidence intervals
// for that power, with CSV output.
//
// Exit codes: 0 success, 1 numeric/runtime failure, 2 usage error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fpower/interval.hpp"
#include "fpower/mcsim.hpp"

namespace {

using namespace fpower;

std::string fmt10(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", x);
    return buf;
}

// All commands honor --out; stdout is the default sink.
struct Sink {
    std::ofstream file;
    std::ostream* out = &std::cout;

    // Returns false (usage error) when the path cannot be opened.
    bool open(const std::string& path) {
        if (path.empty()) return true;
        file.open(path);
        if (!file) return false;
        out = &file;
        return true;
    }
};

struct DataStats {
    int n;
    double ybar;
    double q;  // sum (y_i - ybar)^2
};

// Plain text, one decimal number per line, no header. Throws
// std::invalid_argument with the offending line number on parse failure.
DataStats read_data_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot read data file: " + path);
    std::vector<double> values;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::size_t pos = 0;
        double value;
        try {
            value = std::stod(line, &pos);
        } catch (const std::exception&) {
            throw std::invalid_argument("non-numeric value at line " +
                                        std::to_string(line_no));
        }
        while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos])))
            ++pos;
        if (pos != line.size())
            throw std::invalid_argument("non-numeric value at line " +
                                        std::to_string(line_no));
        values.push_back(value);
    }
    if (values.size() < 2)
        throw std::invalid_argument("data file must contain at least 2 values");

    double sum = 0.0;
    for (double y : values) sum += y;
    const double ybar = sum / values.size();
    double q = 0.0;
    for (double y : values) q += (y - ybar) * (y - ybar);
    return DataStats{static_cast<int>(values.size()), ybar, q};
}

int run_power(double u, double v, double alpha, std::optional<double> delta,
              std::optional<double> sigma, std::optional<double> lambda,
              const std::string& out_path) {
    Sink sink;
    if (!sink.open(out_path)) {
        std::cerr << "cannot write to " << out_path << "\n";
        return 2;
    }
    const power::TestDesign design(u, v, alpha);
    double result;
    if (delta) {
        result = power::power_at_delta(design, *delta);
    } else {
        result = power::power_at_sigma(design, power::NoncentralityMap(*lambda), *sigma);
    }
    *sink.out << fmt10(result) << "\n";
    return 0;
}

int run_ci(std::optional<int> n_flag, double alpha, double gamma, double mu,
           double mu0, const std::string& data_path, std::optional<double> q_flag,
           const std::string& out_path) {
    Sink sink;
    if (!sink.open(out_path)) {
        std::cerr << "cannot write to " << out_path << "\n";
        return 2;
    }

    int n;
    double q;
    if (!data_path.empty()) {
        DataStats stats;
        try {
            stats = read_data_file(data_path);
        } catch (const std::invalid_argument& e) {
            std::cerr << e.what() << "\n";
            return 2;
        }
        n = stats.n;
        q = stats.q;
    } else {
        n = *n_flag;
        q = *q_flag;
    }
    if (!(q > 0.0)) {
        std::cerr << "degenerate sample: zero residual sum of squares\n";
        return 1;
    }

    const double v = n - 1.0;
    const power::TestDesign design(1.0, v, alpha);
    const power::TwoSidedTSpec spec(n, mu0, mu);
    const auto map = spec.map();

    const auto si = interval::sigma_ci_equal_tail(q, v, gamma);
    const auto pi = interval::power_ci(si, design, map);
    const double s = std::sqrt(q / n);  // divisor-n MLE scale
    const double mle = power::power_mle(spec, alpha, s);

    *sink.out << "a,b,power_lo,power_hi,power_mle\n"
              << fmt10(si.a) << "," << fmt10(si.b) << "," << fmt10(pi.lo) << ","
              << fmt10(pi.hi) << "," << fmt10(mle) << "\n";
    return 0;
}

int run_figure1(int n, double alpha, double gamma, double grid_min,
                double grid_max, int grid_steps, const std::string& out_path) {
    Sink sink;
    if (!sink.open(out_path)) {
        std::cerr << "cannot write to " << out_path << "\n";
        return 2;
    }

    // S normalized to 1, so q = n S^2 = n and the axis variable e is
    // (mu - mu0)/S directly.
    const double v = n - 1.0;
    const double q = static_cast<double>(n);
    const power::TestDesign design(1.0, v, alpha);
    const auto si = interval::sigma_ci_equal_tail(q, v, gamma);

    *sink.out << "effect,power_mle,ci_lo,ci_hi\n";
    for (int i = 0; i < grid_steps; ++i) {
        const double e =
            grid_min + (grid_max - grid_min) * i / (grid_steps - 1.0);
        const power::NoncentralityMap map(std::sqrt(static_cast<double>(n)) *
                                          std::fabs(e));
        double mle, lo, hi;
        if (map.lambda_effect == 0.0) {
            mle = lo = hi = alpha;
        } else {
            mle = power::power_at_sigma(design, map, 1.0);
            const auto pi = interval::power_ci(si, design, map);
            lo = pi.lo;
            hi = pi.hi;
        }
        *sink.out << fmt10(e) << "," << fmt10(mle) << "," << fmt10(lo) << ","
                  << fmt10(hi) << "\n";
    }
    return 0;
}

const char* rule_name(mcsim::Rule r) {
    return r == mcsim::Rule::equal_tail ? "equal_tail" : "min_length";
}

int run_coverage(const mcsim::SimConfig& cfg, const std::string& out_path) {
    Sink sink;
    if (!sink.open(out_path)) {
        std::cerr << "cannot write to " << out_path << "\n";
        return 2;
    }
    const auto res = mcsim::coverage_experiment(cfg);

    *sink.out << "interval,rule,replicates,hits,coverage,std_err,nominal,"
                 "optimizer_failures,indicator_mismatches\n";
    const auto row = [&](const char* which, const mcsim::CoverageReport& r) {
        *sink.out << which << "," << rule_name(r.rule) << "," << r.replicates
                  << "," << r.hits << "," << fmt10(r.coverage) << ","
                  << fmt10(r.std_err) << "," << fmt10(r.nominal) << ","
                  << res.optimizer_failures << "," << res.indicator_mismatches
                  << "\n";
    };
    row("sigma", res.sigma_interval);
    row("power", res.power_interval);

    if (res.optimizer_failures >
        static_cast<long>(0.01 * static_cast<double>(cfg.replicates))) {
        std::cerr << "optimizer failure fraction exceeds 1%\n";
        return 1;
    }
    return 0;
}

int run_minlen(double q, double v, double gamma, double u, double alpha,
               double lambda, const std::string& out_path) {
    Sink sink;
    if (!sink.open(out_path)) {
        std::cerr << "cannot write to " << out_path << "\n";
        return 2;
    }
    const power::TestDesign design(u, v, alpha);
    const power::NoncentralityMap map(lambda);
    const auto res = interval::minlen_positions(q, v, gamma, design, map);

    *sink.out << "A,B,a,b,power_lo,power_hi,L,L_equal_tail\n"
              << fmt10(res.A) << "," << fmt10(res.B) << "," << fmt10(res.sigma.a)
              << "," << fmt10(res.sigma.b) << "," << fmt10(res.power.lo) << ","
              << fmt10(res.power.hi) << "," << fmt10(res.length) << ","
              << fmt10(res.equal_tail_length) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Power of F-tests and confidence intervals for that power"};
    app.require_subcommand(1);

    std::string out_path;

    // power
    auto* power_cmd = app.add_subcommand("power", "Power at a fixed alternative");
    double p_u, p_v, p_alpha;
    std::optional<double> p_delta, p_sigma, p_lambda;
    power_cmd->add_option("--u", p_u, "numerator df")->required();
    power_cmd->add_option("--v", p_v, "denominator df")->required();
    power_cmd->add_option("--alpha", p_alpha, "test level")->required();
    power_cmd->add_option("--delta", p_delta, "noncentrality (distance scale)");
    power_cmd->add_option("--sigma", p_sigma, "true scale");
    power_cmd->add_option("--lambda", p_lambda, "effect constant of delta(sigma)");
    power_cmd->add_option("--out", out_path, "write output to file");

    // ci
    auto* ci_cmd = app.add_subcommand("ci", "Equal-tail power confidence interval");
    std::optional<int> c_n;
    double c_alpha = 0.05, c_gamma = 0.05, c_mu, c_mu0;
    std::string c_data;
    std::optional<double> c_q;
    ci_cmd->add_option("--n", c_n, "sample size (required with --q)");
    ci_cmd->add_option("--alpha", c_alpha, "test level");
    ci_cmd->add_option("--gamma", c_gamma, "1 - confidence level");
    ci_cmd->add_option("--mu", c_mu, "alternative mean")->required();
    ci_cmd->add_option("--mu0", c_mu0, "null mean")->required();
    ci_cmd->add_option("--data", c_data, "data file, one observation per line");
    ci_cmd->add_option("--q", c_q, "precomputed residual sum of squares");
    ci_cmd->add_option("--out", out_path, "write output to file");

    // figure1
    auto* fig_cmd = app.add_subcommand(
        "figure1", "Power curve and CI band over an effect grid");
    int f_n = 10, f_steps = 81;
    double f_alpha = 0.05, f_gamma = 0.05, f_min = -2.0, f_max = 2.0;
    fig_cmd->add_option("--n", f_n, "sample size");
    fig_cmd->add_option("--alpha", f_alpha, "test level");
    fig_cmd->add_option("--gamma", f_gamma, "1 - confidence level");
    fig_cmd->add_option("--grid-min", f_min, "lowest effect (mu-mu0)/S");
    fig_cmd->add_option("--grid-max", f_max, "highest effect (mu-mu0)/S");
    fig_cmd->add_option("--grid-steps", f_steps, "grid size")
        ->check(CLI::Range(2, 1000000));
    fig_cmd->add_option("--out", out_path, "write output to file");

    // coverage
    auto* cov_cmd = app.add_subcommand("coverage", "Monte Carlo coverage experiment");
    mcsim::SimConfig cfg;
    std::string rule_str = "equal_tail";
    cov_cmd->add_option("--rule", rule_str, "equal_tail or min_length")
        ->check(CLI::IsMember({"equal_tail", "min_length"}));
    cov_cmd->add_option("--n", cfg.n, "sample size");
    cov_cmd->add_option("--mu", cfg.mu, "true mean");
    cov_cmd->add_option("--mu0", cfg.mu0, "null mean");
    cov_cmd->add_option("--sigma", cfg.sigma, "true scale");
    cov_cmd->add_option("--alpha", cfg.alpha, "test level");
    cov_cmd->add_option("--gamma", cfg.gamma, "1 - confidence level");
    cov_cmd->add_option("--replicates", cfg.replicates, "replicate count");
    cov_cmd->add_option("--seed", cfg.seed, "rng seed");
    cov_cmd->add_option("--workers", cfg.workers, "worker threads");
    cov_cmd->add_option("--out", out_path, "write output to file");

    // minlen
    auto* ml_cmd = app.add_subcommand("minlen", "Minimum-length power interval");
    double m_q, m_v, m_gamma = 0.05, m_u = 1.0, m_alpha = 0.05, m_lambda;
    ml_cmd->add_option("--q", m_q, "observed residual sum of squares")->required();
    ml_cmd->add_option("--v", m_v, "denominator df")->required();
    ml_cmd->add_option("--gamma", m_gamma, "1 - confidence level");
    ml_cmd->add_option("--u", m_u, "numerator df");
    ml_cmd->add_option("--alpha", m_alpha, "test level");
    ml_cmd->add_option("--lambda", m_lambda, "effect constant, must be > 0")->required();
    ml_cmd->add_option("--out", out_path, "write output to file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    }

    try {
        if (power_cmd->parsed()) {
            const bool have_delta = p_delta.has_value();
            const bool have_map = p_sigma.has_value() && p_lambda.has_value();
            if (have_delta == have_map || (p_sigma.has_value() != p_lambda.has_value())) {
                std::cerr << "power: give exactly one of --delta or --sigma with --lambda\n";
                return 2;
            }
            return run_power(p_u, p_v, p_alpha, p_delta, p_sigma, p_lambda, out_path);
        }
        if (ci_cmd->parsed()) {
            const bool have_data = !c_data.empty();
            const bool have_q = c_q.has_value() && c_n.has_value();
            if (have_data == have_q || (c_q.has_value() != c_n.has_value() && !have_data)) {
                std::cerr << "ci: give either --data or both --q and --n\n";
                return 2;
            }
            return run_ci(c_n, c_alpha, c_gamma, c_mu, c_mu0, c_data, c_q, out_path);
        }
        if (fig_cmd->parsed())
            return run_figure1(f_n, f_alpha, f_gamma, f_min, f_max, f_steps, out_path);
        if (cov_cmd->parsed()) {
            cfg.rule = rule_str == "equal_tail" ? mcsim::Rule::equal_tail
                                                : mcsim::Rule::min_length;
            return run_coverage(cfg, out_path);
        }
        if (ml_cmd->parsed()) {
            if (!(m_lambda > 0.0)) {
                std::cerr << "minlen: --lambda must be > 0\n";
                return 2;
            }
            return run_minlen(m_q, m_v, m_gamma, m_u, m_alpha, m_lambda, out_path);
        }
    } catch (const std::domain_error& e) {
        std::cerr << "invalid argument: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
