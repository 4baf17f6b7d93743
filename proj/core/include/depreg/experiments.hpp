#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "depreg/methods.hpp"
#include "depreg/processes.hpp"
#include "depreg/rng.hpp"

namespace depreg {

struct ExperimentConfig {
    ProcessSpec process = WhiteNoise{1.0};
    std::size_t n = 2000;
    int degree = 0;
    /// 0 selects default_m_max(n, degree).
    std::size_t m_max = 0;
    /// Degree and m_max of each method are overridden by the config's.
    std::vector<MethodSpec> methods;
    std::size_t trials = 100;
    Seed base_seed{0};
};

struct TrialOutcome {
    /// 0 when the method failed on this trial.
    std::size_t m_selected = 0;
    /// ||f* - f_hat||_n^2 of the selected model; NaN on failure.
    double risk = 0.0;
    std::optional<double> h1;
    std::optional<double> h2;
    std::string error;

    bool ok() const noexcept { return m_selected != 0; }
};

struct MethodTrials {
    std::string name;
    std::vector<TrialOutcome> trials;
};

struct RiskReport {
    std::size_t n = 0;
    std::size_t m_max = 0;
    /// Mean over trials of ||f* - f_hat_m||_n^2, entry m-1 for m = 1..m_max.
    std::vector<double> per_m_risk;
    /// argmin of per_m_risk (1-based, smallest m on ties).
    std::size_t oracle_m = 0;
    /// Per-trial minimum over m of the true risk.
    std::vector<double> trial_oracle_risk;
    std::vector<MethodTrials> per_method;
};

struct RunOptions {
    /// Worker threads; 0 uses std::thread::hardware_concurrency().
    std::size_t threads = 0;
};

/// Monte Carlo risk study. Trial t uses seed base_seed.derive(t); results are
/// reduced in trial order, so they do not depend on the thread count.
RiskReport run_experiment(const ExperimentConfig& config, RunOptions options = {});

/// Least-squares slope of log(per_m_risk) against log(m) for m in [m_lo, m_hi].
double variance_exponent(const RiskReport& report, std::size_t m_lo, std::size_t m_hi);

/// Writes `<prefix>.risk.csv` (m,mean_risk) and `<prefix>.methods.csv`
/// (method,trial,m_selected,risk,H1,H2) with 12 significant digits.
void write_report_csv(const RiskReport& report, const std::filesystem::path& prefix);

}  // namespace depreg
