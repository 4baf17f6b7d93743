#include "depreg/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <limits>
#include <thread>

#include "depreg/errors.hpp"
#include "depreg/partition_regression.hpp"
#include "depreg/penalties.hpp"

namespace depreg {

namespace {

struct TrialResult {
    std::vector<double> risk;
    std::vector<TrialOutcome> methods;
};

TrialResult run_trial(const ExperimentConfig& config, const std::vector<MethodSpec>& methods,
                      std::size_t m_max, std::span<const double> signal, std::size_t trial) {
    const std::size_t n = config.n;
    const std::vector<double> y =
        generate_observations(n, config.process, config.base_seed.derive(trial));

    TrialResult out;
    out.risk.resize(m_max);
    std::vector<double> contrasts(m_max);
    for (std::size_t m = 1; m <= m_max; ++m) {
        const PiecewiseFit fit = fit_piecewise(y, PartitionModel(n, m, config.degree));
        double risk = 0.0;
        double contrast = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double bias = signal[i] - fit.fitted[i];
            const double resid = y[i] - fit.fitted[i];
            risk += bias * bias;
            contrast += resid * resid;
        }
        out.risk[m - 1] = risk / static_cast<double>(n);
        contrasts[m - 1] = contrast / static_cast<double>(n);
    }

    out.methods.reserve(methods.size());
    for (const MethodSpec& spec : methods) {
        TrialOutcome outcome;
        try {
            const MethodResult result = run_method(y, spec, contrasts);
            outcome.m_selected = result.m_selected;
            outcome.risk = out.risk[result.m_selected - 1];
            if (!result.hurst_estimates.empty()) {
                outcome.h1 = result.hurst_estimates[0];
            }
            if (result.hurst_estimates.size() > 1) {
                outcome.h2 = result.hurst_estimates[1];
            }
        } catch (const NumericalError& e) {
            outcome.m_selected = 0;
            outcome.risk = std::numeric_limits<double>::quiet_NaN();
            outcome.error = e.what();
        }
        out.methods.push_back(std::move(outcome));
    }
    return out;
}

std::string format_value(double v) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.12g", v);
    return buffer;
}

}  // namespace

RiskReport run_experiment(const ExperimentConfig& config, RunOptions options) {
    validate(config.process);
    if (config.trials < 1) {
        throw InputError("experiment needs at least one trial");
    }
    const std::size_t m_max =
        config.m_max == 0 ? default_m_max(config.n, config.degree) : config.m_max;
    if (m_max > PartitionModel::max_cells(config.n, config.degree)) {
        throw InputError("m_max = " + std::to_string(m_max) + " too large for n = " +
                         std::to_string(config.n));
    }
    std::vector<MethodSpec> methods = config.methods;
    for (MethodSpec& spec : methods) {
        spec.degree = config.degree;
        spec.m_max = m_max;
    }

    const std::vector<double> signal = signal_grid(config.n);
    std::vector<TrialResult> results(config.trials);
    std::vector<std::exception_ptr> failures(config.trials);

    std::size_t threads = options.threads;
    if (threads == 0) {
        threads = std::max(1u, std::thread::hardware_concurrency());
    }
    threads = std::min(threads, config.trials);

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t t = next++; t < config.trials; t = next++) {
            try {
                results[t] = run_trial(config, methods, m_max, signal, t);
            } catch (...) {
                failures[t] = std::current_exception();
            }
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (std::size_t k = 0; k < threads; ++k) {
            pool.emplace_back(worker);
        }
    }
    for (const auto& failure : failures) {
        if (failure) {
            std::rethrow_exception(failure);
        }
    }

    RiskReport report;
    report.n = config.n;
    report.m_max = m_max;
    report.per_m_risk.assign(m_max, 0.0);
    report.trial_oracle_risk.resize(config.trials);
    for (std::size_t t = 0; t < config.trials; ++t) {
        for (std::size_t k = 0; k < m_max; ++k) {
            report.per_m_risk[k] += results[t].risk[k];
        }
        report.trial_oracle_risk[t] =
            *std::min_element(results[t].risk.begin(), results[t].risk.end());
    }
    for (double& r : report.per_m_risk) {
        r /= static_cast<double>(config.trials);
    }
    report.oracle_m = static_cast<std::size_t>(
                          std::min_element(report.per_m_risk.begin(), report.per_m_risk.end()) -
                          report.per_m_risk.begin()) +
                      1;

    for (std::size_t k = 0; k < methods.size(); ++k) {
        MethodTrials entry;
        entry.name = methods[k].name();
        entry.trials.reserve(config.trials);
        bool any_ok = false;
        for (std::size_t t = 0; t < config.trials; ++t) {
            any_ok = any_ok || results[t].methods[k].ok();
            entry.trials.push_back(std::move(results[t].methods[k]));
        }
        if (!any_ok) {
            throw PipelineError(entry.name, "failed on every trial; first error: " +
                                                entry.trials.front().error);
        }
        report.per_method.push_back(std::move(entry));
    }
    return report;
}

double variance_exponent(const RiskReport& report, std::size_t m_lo, std::size_t m_hi) {
    if (m_lo < 1 || m_lo >= m_hi || m_hi > report.per_m_risk.size()) {
        throw InputError("variance window [" + std::to_string(m_lo) + ", " +
                         std::to_string(m_hi) + "] invalid for m_max = " +
                         std::to_string(report.per_m_risk.size()));
    }
    double sx = 0.0;
    double sy = 0.0;
    double sxx = 0.0;
    double sxy = 0.0;
    const double count = static_cast<double>(m_hi - m_lo + 1);
    for (std::size_t m = m_lo; m <= m_hi; ++m) {
        const double risk = report.per_m_risk[m - 1];
        if (!(risk > 0.0)) {
            throw NumericalError("nonpositive risk at m = " + std::to_string(m));
        }
        const double x = std::log(static_cast<double>(m));
        const double y = std::log(risk);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (sxy - sx * sy / count) / (sxx - sx * sx / count);
}

void write_report_csv(const RiskReport& report, const std::filesystem::path& prefix) {
    const std::filesystem::path risk_path = prefix.string() + ".risk.csv";
    const std::filesystem::path methods_path = prefix.string() + ".methods.csv";

    std::ofstream risk(risk_path);
    if (!risk) {
        throw IoError("cannot open " + risk_path.string() + " for writing");
    }
    risk << "m,mean_risk\n";
    for (std::size_t k = 0; k < report.per_m_risk.size(); ++k) {
        risk << (k + 1) << ',' << format_value(report.per_m_risk[k]) << '\n';
    }
    if (!risk.flush()) {
        throw IoError("failed writing " + risk_path.string());
    }

    std::ofstream methods(methods_path);
    if (!methods) {
        throw IoError("cannot open " + methods_path.string() + " for writing");
    }
    methods << "method,trial,m_selected,risk,H1,H2\n";
    for (const MethodTrials& entry : report.per_method) {
        for (std::size_t t = 0; t < entry.trials.size(); ++t) {
            const TrialOutcome& o = entry.trials[t];
            methods << entry.name << ',' << t << ',';
            if (o.ok()) {
                methods << o.m_selected << ',' << format_value(o.risk);
            } else {
                methods << ',';
            }
            methods << ',' << (o.h1 ? format_value(*o.h1) : "") << ','
                    << (o.h2 ? format_value(*o.h2) : "") << '\n';
        }
    }
    if (!methods.flush()) {
        throw IoError("failed writing " + methods_path.string());
    }
}

}  // namespace depreg
