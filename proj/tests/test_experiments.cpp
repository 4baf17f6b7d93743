#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "depreg/errors.hpp"
#include "depreg/experiments.hpp"
#include "depreg/partition_regression.hpp"
#include "depreg/penalties.hpp"
#include "support/oracles.hpp"

using namespace depreg;

namespace {

std::filesystem::path scratch(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "depreg_test_experiments";
    std::filesystem::create_directories(dir);
    return dir / name;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        out.push_back(line);
    }
    return out;
}

}  // namespace

TEST_CASE("zero noise gives the squared bias curve") {
    ExperimentConfig config;
    config.process = WhiteNoise{0.0};
    config.n = 1024;
    config.m_max = 128;
    config.trials = 2;
    const RiskReport report = run_experiment(config, {1});
    const auto f = signal_grid(config.n);
    for (std::size_t m = 1; m <= 128; ++m) {
        const PiecewiseFit fit = fit_piecewise(f, PartitionModel(config.n, m, 0));
        double bias = 0.0;
        for (std::size_t i = 0; i < config.n; ++i) {
            bias += (f[i] - fit.fitted[i]) * (f[i] - fit.fitted[i]);
        }
        CHECK(report.per_m_risk[m - 1] == doctest::Approx(bias / config.n).epsilon(1e-12));
    }
    for (std::size_t m = 1; 2 * m <= 128; m *= 2) {
        CHECK(report.per_m_risk[2 * m - 1] <= report.per_m_risk[m - 1]);
    }
    std::size_t best_pow2 = 1;
    for (std::size_t m = 1; m <= 128; m *= 2) {
        if (report.per_m_risk[m - 1] < report.per_m_risk[best_pow2 - 1]) {
            best_pow2 = m;
        }
    }
    CHECK(best_pow2 == 128);
}

TEST_CASE("report invariants and oracle dominance") {
    ExperimentConfig config;
    config.process = Fgn{0.7, 1.0};
    config.n = 1000;
    config.trials = 12;
    config.base_seed = Seed(4);
    config.methods = {parse_method("cdj"), parse_method("why"), parse_method("whywhres"),
                      parse_method("hgiven:0.7")};
    const RiskReport report = run_experiment(config, {3});
    CHECK(report.m_max == default_m_max(1000, 0));
    CHECK(report.per_m_risk.size() == report.m_max);
    for (double r : report.per_m_risk) {
        CHECK(r >= 0.0);
        CHECK(report.per_m_risk[report.oracle_m - 1] <= r);
    }
    REQUIRE(report.per_method.size() == 4);
    CHECK(report.per_method[3].name == "hgiven(0.7)");
    for (const MethodTrials& mt : report.per_method) {
        REQUIRE(mt.trials.size() == 12);
        for (std::size_t t = 0; t < 12; ++t) {
            const TrialOutcome& o = mt.trials[t];
            REQUIRE(o.ok());
            CHECK(o.risk >= report.trial_oracle_risk[t]);
        }
    }
    CHECK(report.per_method[1].trials[0].h1.has_value());
    CHECK_FALSE(report.per_method[1].trials[0].h2.has_value());
    CHECK(report.per_method[2].trials[0].h2.has_value());
}

TEST_CASE("trial t reproduces a direct run with the derived seed") {
    ExperimentConfig config;
    config.process = Arma21{};
    config.n = 800;
    config.m_max = 100;
    config.trials = 3;
    config.base_seed = Seed(99);
    config.methods = {parse_method("cdj")};
    const RiskReport report = run_experiment(config, {2});
    for (std::size_t t = 0; t < 3; ++t) {
        const auto y = generate_observations(800, Arma21{}, Seed(99).derive(t));
        MethodSpec s = parse_method("cdj", 0, 100);
        CHECK(run_method(y, s).m_selected == report.per_method[0].trials[t].m_selected);
    }
}

TEST_CASE("white noise risk grows linearly in the variance regime") {
    ExperimentConfig config;
    config.process = WhiteNoise{1.0};
    config.n = 2000;
    config.trials = 40;
    config.base_seed = Seed(1);
    const RiskReport report = run_experiment(config, {});
    CHECK(std::abs(variance_exponent(report, 50, 200) - 1.0) <= 0.15);
}

TEST_CASE("variance exponent input checks") {
    RiskReport report;
    report.per_m_risk = {1.0, 2.0, 0.0, 4.0};
    CHECK(variance_exponent(report, 1, 2) == doctest::Approx(1.0));
    CHECK_THROWS_AS(variance_exponent(report, 2, 2), InputError);
    CHECK_THROWS_AS(variance_exponent(report, 0, 2), InputError);
    CHECK_THROWS_AS(variance_exponent(report, 1, 5), InputError);
    CHECK_THROWS_AS(variance_exponent(report, 2, 4), NumericalError);
}

TEST_CASE("config validation") {
    ExperimentConfig config;
    config.trials = 0;
    CHECK_THROWS_AS(run_experiment(config), InputError);
    config.trials = 1;
    config.n = 100;
    config.m_max = 101;
    CHECK_THROWS_AS(run_experiment(config), InputError);
    config.m_max = 10;
    config.process = Fgn{1.5, 1.0};
    CHECK_THROWS_AS(run_experiment(config), InputError);
}

TEST_CASE("csv output") {
    ExperimentConfig config;
    config.process = DmrChain{8.0};
    config.n = 500;
    config.m_max = 50;
    config.trials = 2;
    config.methods = {parse_method("cdjwhres")};
    const RiskReport report = run_experiment(config);
    const auto prefix = scratch("one_method");
    write_report_csv(report, prefix);
    const auto risk = lines(slurp(prefix.string() + ".risk.csv"));
    const auto methods = lines(slurp(prefix.string() + ".methods.csv"));
    REQUIRE(risk.size() == 51);
    CHECK(risk[0] == "m,mean_risk");
    REQUIRE(methods.size() == 3);
    CHECK(methods[0] == "method,trial,m_selected,risk,H1,H2");
    CHECK(methods[1].rfind("cdjwhres,0,", 0) == 0);
    CHECK(methods[1].back() == ',');

    for (std::size_t m = 1; m <= 50; ++m) {
        const std::string& row = risk[m];
        const auto comma = row.find(',');
        CHECK(row.substr(0, comma) == std::to_string(m));
        const double parsed = std::stod(row.substr(comma + 1));
        char buffer[64];
        std::snprintf(buffer, sizeof buffer, "%.12g", report.per_m_risk[m - 1]);
        CHECK(row.substr(comma + 1) == buffer);
        CHECK(parsed == doctest::Approx(report.per_m_risk[m - 1]).epsilon(1e-11));
    }

    config.methods.clear();
    const auto empty_prefix = scratch("no_methods");
    write_report_csv(run_experiment(config), empty_prefix);
    CHECK(slurp(empty_prefix.string() + ".methods.csv") == "method,trial,m_selected,risk,H1,H2\n");
    CHECK(lines(slurp(empty_prefix.string() + ".risk.csv")).size() == 51);

    CHECK_THROWS_AS(write_report_csv(report, "/nonexistent-dir/x/report"), IoError);
}

TEST_CASE("output is byte-identical across thread counts") {
    ExperimentConfig config;
    config.process = Fgn{0.3, 1.0};
    config.n = 700;
    config.trials = 9;
    config.base_seed = Seed(123);
    config.methods = {parse_method("cdj"), parse_method("whywhres")};
    std::vector<std::string> outputs;
    for (std::size_t threads : {1, 2, 5, 16}) {
        const auto prefix = scratch("threads" + std::to_string(threads));
        write_report_csv(run_experiment(config, {threads}), prefix);
        outputs.push_back(slurp(prefix.string() + ".risk.csv") + slurp(prefix.string() + ".methods.csv"));
    }
    for (const auto& o : outputs) {
        CHECK(o == outputs.front());
    }
}
