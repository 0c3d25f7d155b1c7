#include <doctest.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "fpower/interval.hpp"

namespace {

struct CmdResult {
    int exit_code;
    std::string out;
};

CmdResult run(const std::string& args) {
    const std::string cmd = std::string(FPOWER_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    std::array<char, 4096> buf;
    while (std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe))
        out.append(buf.data(), n);
    const int status = pclose(pipe);
    return CmdResult{WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> fields;
        std::istringstream ls(line);
        std::string field;
        while (std::getline(ls, field, ',')) fields.push_back(field);
        rows.push_back(std::move(fields));
    }
    return rows;
}

std::string temp_path(const std::string& name) {
    return std::string("/tmp/fpower_test_") + name;
}

}  // namespace

TEST_CASE("power command") {
    auto res = run("power --u 1 --v 9 --alpha 0.05 --delta 0");
    CHECK(res.exit_code == 0);
    CHECK(std::stod(res.out) == doctest::Approx(0.05).epsilon(1e-9));

    res = run("power --u 2 --v 12 --alpha 0.05 --delta 3");
    CHECK(res.exit_code == 0);
    const double expect = fpower::power::power_at_delta(
        fpower::power::TestDesign(2.0, 12.0, 0.05), 3.0);
    CHECK(std::stod(res.out) == doctest::Approx(expect).epsilon(1e-9));

    // sigma + lambda route equals the delta route.
    res = run("power --u 2 --v 12 --alpha 0.05 --sigma 0.5 --lambda 1.5");
    CHECK(res.exit_code == 0);
    CHECK(std::stod(res.out) == doctest::Approx(expect).epsilon(1e-9));

    CHECK(run("power --u 1 --v 9 --alpha 0.05").exit_code == 2);
    CHECK(run("power --u 1 --v 9 --alpha 0.05 --delta 1 --sigma 1 --lambda 1")
              .exit_code == 2);
    CHECK(run("power --u 1 --alpha 0.05 --delta 1").exit_code == 2);
}

TEST_CASE("ci command with data file matches library calls") {
    const std::string path = temp_path("data.txt");
    const std::vector<double> data = {1.2, -0.3, 0.8, 2.1, 0.05, -1.4, 0.9, 1.7};
    {
        std::ofstream f(path);
        for (double y : data) f << y << "\n";
    }
    const auto res = run("ci --mu 1 --mu0 0 --alpha 0.05 --gamma 0.05 --data " + path);
    CHECK(res.exit_code == 0);
    const auto rows = parse_csv(res.out);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0] == std::vector<std::string>{"a", "b", "power_lo", "power_hi",
                                              "power_mle"});

    double sum = 0.0;
    for (double y : data) sum += y;
    const double ybar = sum / data.size();
    double q = 0.0;
    for (double y : data) q += (y - ybar) * (y - ybar);
    const int n = static_cast<int>(data.size());

    const fpower::power::TestDesign design(1.0, n - 1.0, 0.05);
    const fpower::power::TwoSidedTSpec spec(n, 0.0, 1.0);
    const auto si = fpower::interval::sigma_ci_equal_tail(q, n - 1.0, 0.05);
    const auto pi = fpower::interval::power_ci(si, design, spec.map());
    const double mle =
        fpower::power::power_mle(spec, 0.05, std::sqrt(q / n));

    CHECK(std::stod(rows[1][0]) == doctest::Approx(si.a).epsilon(1e-9));
    CHECK(std::stod(rows[1][1]) == doctest::Approx(si.b).epsilon(1e-9));
    CHECK(std::stod(rows[1][2]) == doctest::Approx(pi.lo).epsilon(1e-9));
    CHECK(std::stod(rows[1][3]) == doctest::Approx(pi.hi).epsilon(1e-9));
    CHECK(std::stod(rows[1][4]) == doctest::Approx(mle).epsilon(1e-9));
}

TEST_CASE("ci command error paths") {
    const std::string flat = temp_path("flat.txt");
    {
        std::ofstream f(flat);
        for (int i = 0; i < 5; ++i) f << "3.0\n";
    }
    CHECK(run("ci --mu 1 --mu0 0 --data " + flat).exit_code == 1);

    const std::string bad = temp_path("bad.txt");
    {
        std::ofstream f(bad);
        f << "1.0\nnot-a-number\n2.0\n";
    }
    CHECK(run("ci --mu 1 --mu0 0 --data " + bad).exit_code == 2);
    CHECK(run("ci --mu 1 --mu0 0 --data /nonexistent/file.txt").exit_code == 2);
    CHECK(run("ci --mu 1 --mu0 0").exit_code == 2);
    CHECK(run("ci --mu 1 --mu0 0 --q 5.0").exit_code == 2);  // missing --n

    // mu = mu0: degenerate power interval at alpha.
    const auto res = run("ci --mu 0 --mu0 0 --n 10 --q 9.0");
    CHECK(res.exit_code == 0);
    const auto rows = parse_csv(res.out);
    REQUIRE(rows.size() == 2);
    CHECK(std::stod(rows[1][2]) == doctest::Approx(0.05).epsilon(1e-9));
    CHECK(std::stod(rows[1][3]) == doctest::Approx(0.05).epsilon(1e-9));
}

TEST_CASE("figure1 command default grid") {
    const std::string out = temp_path("fig1.csv");
    CHECK(run("figure1 --out " + out).exit_code == 0);
    std::ifstream f(out);
    std::stringstream ss;
    ss << f.rdbuf();
    const auto rows = parse_csv(ss.str());
    REQUIRE(rows.size() == 82);  // header + 81 grid rows
    CHECK(rows[0] == std::vector<std::string>{"effect", "power_mle", "ci_lo", "ci_hi"});

    // Row at e = 0 is (0, alpha, alpha, alpha); symmetry and monotonicity
    // in |e|; band contains the estimate on every row.
    const int mid = 41;
    CHECK(std::stod(rows[mid][0]) == 0.0);
    for (int j = 1; j <= 3; ++j)
        CHECK(std::stod(rows[mid][j]) == doctest::Approx(0.05).epsilon(1e-12));
    double prev = 0.0;
    for (int i = mid; i <= 81; ++i) {
        const double mle = std::stod(rows[i][1]);
        const double lo = std::stod(rows[i][2]);
        const double hi = std::stod(rows[i][3]);
        if (i > mid) CHECK(mle > prev);
        prev = mle;
        CHECK(lo <= mle);
        CHECK(mle <= hi);
        // symmetric counterpart
        const int j = 2 * mid - i + 1 - 1;
        CHECK(std::stod(rows[j][1]) == doctest::Approx(mle).epsilon(1e-9));
    }
    CHECK(run("figure1 --out /nonexistent/dir/fig.csv").exit_code == 2);
    CHECK(run("figure1 --grid-steps 1").exit_code == 2);
}

TEST_CASE("coverage command determinism") {
    const std::string args =
        "coverage --rule equal_tail --n 8 --mu 1 --mu0 0 --sigma 1 "
        "--alpha 0.05 --gamma 0.05 --replicates 3000 --seed 99";
    const auto a = run(args + " --workers 1");
    const auto b = run(args + " --workers 5");
    const auto c = run(args + " --workers 1");
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out == c.out);
    const auto rows = parse_csv(a.out);
    REQUIRE(rows.size() == 3);
    CHECK(rows[1][0] == "sigma");
    CHECK(rows[2][0] == "power");
}

TEST_CASE("minlen command") {
    const auto res = run("minlen --q 9 --v 9 --gamma 0.05 --u 1 --alpha 0.05 "
                         "--lambda 3.1622776601683795");
    CHECK(res.exit_code == 0);
    const auto rows = parse_csv(res.out);
    REQUIRE(rows.size() == 2);
    const double L = std::stod(rows[1][6]);
    const double L_eq = std::stod(rows[1][7]);
    CHECK(L <= L_eq + 1e-10);

    CHECK(run("minlen --q 9 --v 9 --lambda 0").exit_code == 2);
    CHECK(run("minlen --q 9 --v 9").exit_code == 2);
}
