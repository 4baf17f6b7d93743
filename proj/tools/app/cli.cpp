#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "depreg/errors.hpp"
#include "depreg/experiments.hpp"
#include "depreg/methods.hpp"
#include "depreg/partition_regression.hpp"
#include "depreg/penalties.hpp"
#include "depreg/processes.hpp"
#include "nile.hpp"
#include "series_io.hpp"

namespace depreg::app {

namespace {

using nlohmann::json;

struct ProcessArgs {
    std::string name = "fgn";
    double hurst = 0.7;
    double sigma2 = 1.0;
    double a = 8.0;
};

ProcessSpec make_process(const ProcessArgs& args) {
    ProcessSpec spec;
    if (args.name == "fgn") {
        spec = Fgn{args.hurst, args.sigma2};
    } else if (args.name == "arma" || args.name == "arma21") {
        spec = Arma21{};
    } else if (args.name == "dmr") {
        spec = DmrChain{args.a};
    } else if (args.name == "white") {
        spec = WhiteNoise{args.sigma2};
    } else {
        throw InputError("unknown process '" + args.name + "' (expected fgn, arma, dmr, white)");
    }
    validate(spec);
    return spec;
}

void add_process_options(CLI::App& cmd, ProcessArgs& args) {
    cmd.add_option("--process", args.name, "Error process: fgn, arma, dmr, white")
        ->capture_default_str();
    cmd.add_option("--hurst", args.hurst, "Hurst exponent of fgn")->capture_default_str();
    cmd.add_option("--sigma2", args.sigma2, "Variance of fgn or white noise")
        ->capture_default_str();
    cmd.add_option("--a", args.a, "Parameter a of the dmr chain")->capture_default_str();
}

enum class Format { Csv, Json };

void add_format_option(CLI::App& cmd, Format& format) {
    const std::map<std::string, Format> names{{"csv", Format::Csv}, {"json", Format::Json}};
    cmd.add_option("--format", format, "Output format: csv or json")
        ->transform(CLI::CheckedTransformer(names, CLI::ignore_case));
}

/// Writes to `path`, or to `fallback` when the path is empty.
template <typename Body>
void emit(const std::string& path, std::ostream& fallback, Body&& body) {
    if (path.empty()) {
        body(fallback);
        return;
    }
    const std::filesystem::path p(path);
    if (p.has_parent_path()) {
        std::filesystem::create_directories(p.parent_path());
    }
    std::ofstream file(p);
    if (!file) {
        throw IoError("cannot open " + path + " for writing");
    }
    body(file);
    if (!file.flush()) {
        throw IoError("failed writing " + path);
    }
}

double median(std::vector<double> v) {
    if (v.empty()) {
        return std::nan("");
    }
    std::sort(v.begin(), v.end());
    const std::size_t h = v.size() / 2;
    return v.size() % 2 == 1 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

std::string csv_number(double v) {
    return std::isfinite(v) ? format_exact(v) : std::string();
}

void write_fit_table(std::ostream& out, const SeriesFile& series, std::span<const double> fitted) {
    out << (series.years ? "year" : "index") << ",y,fitted,residual\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
        const double y = series.values[i];
        out << (series.years ? format_exact((*series.years)[i]) : std::to_string(i + 1)) << ','
            << format_exact(y) << ',' << format_exact(fitted[i]) << ','
            << format_exact(y - fitted[i]) << '\n';
    }
}

json method_result_json(const MethodSpec& spec, const MethodResult& r) {
    json j;
    j["method"] = spec.name();
    j["degree"] = spec.degree;
    j["m_max"] = spec.m_max;
    j["m_selected"] = r.m_selected;
    j["kappa_dj"] = r.kappa_dj;
    j["pre_model"] = r.pre_model ? json(*r.pre_model) : json(nullptr);
    j["hurst_estimates"] = r.hurst_estimates;
    return j;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
    ProcessArgs process;
    std::size_t n = 2000;
    std::uint64_t seed = 0;
    bool errors_only = false;
    std::string out;
};

void run_simulate(const SimulateArgs& args, std::ostream& out) {
    const ProcessSpec spec = make_process(args.process);
    const Seed seed(args.seed);
    const std::vector<double> values = args.errors_only ? simulate_errors(args.n, spec, seed)
                                                        : generate_observations(args.n, spec, seed);
    const std::vector<std::string> comments{
        "depreg simulate " + describe(spec) + " n=" + std::to_string(args.n) +
        " seed=" + std::to_string(args.seed) + (args.errors_only ? " errors-only" : "")};
    emit(args.out, out, [&](std::ostream& o) { write_series(o, values, comments); });
}

// ---------------------------------------------------------------- fit

struct FitArgs {
    std::string in;
    std::size_t m = 1;
    int degree = 0;
    Format format = Format::Csv;
    std::string out;
};

void run_fit(const FitArgs& args, std::ostream& out) {
    const SeriesFile series = load_series(args.in);
    const PiecewiseFit fit = fit_piecewise(series.values, PartitionModel(series.size(), args.m, args.degree));
    emit(args.out, out, [&](std::ostream& o) {
        if (args.format == Format::Csv) {
            write_fit_table(o, series, fit.fitted);
            return;
        }
        json j;
        j["n"] = series.size();
        j["m"] = args.m;
        j["degree"] = args.degree;
        j["contrast"] = empirical_contrast(series.values, fit);
        json cells = json::array();
        for (std::size_t c = 0; c < fit.coefficients.size(); ++c) {
            const Cell& cell = fit.model.cells()[c];
            const Eigen::VectorXd& a = fit.coefficients[c];
            cells.push_back({{"begin", cell.begin + 1},
                             {"end", cell.end},
                             {"coefficients", std::vector<double>(a.data(), a.data() + a.size())}});
        }
        j["cells"] = std::move(cells);
        j["fitted"] = fit.fitted;
        o << j.dump(2) << '\n';
    });
}

// ---------------------------------------------------------------- select

struct SelectArgs {
    std::string in;
    std::string method = "cdj";
    int degree = 0;
    std::size_t m_max = 0;
    Format format = Format::Json;
    std::string out;
    std::string fitted_out;
};

void run_select(const SelectArgs& args, std::ostream& out) {
    const SeriesFile series = load_series(args.in);
    MethodSpec spec = parse_method(args.method, args.degree, args.m_max);
    if (spec.m_max == 0) {
        spec.m_max = default_m_max(series.size(), spec.degree);
    }
    const MethodResult result = run_method(series.values, spec);
    emit(args.out, out, [&](std::ostream& o) {
        if (args.format == Format::Csv) {
            const auto& h = result.hurst_estimates;
            o << "method,n,degree,m_max,m_selected,kappa_dj,pre_model,H1,H2\n"
              << spec.name() << ',' << series.size() << ',' << spec.degree << ',' << spec.m_max
              << ',' << result.m_selected << ',' << format_exact(result.kappa_dj) << ','
              << (result.pre_model ? std::to_string(*result.pre_model) : "") << ','
              << (h.size() > 0 ? format_exact(h[0]) : "") << ','
              << (h.size() > 1 ? format_exact(h[1]) : "") << '\n';
            return;
        }
        json j = method_result_json(spec, result);
        j["n"] = series.size();
        j["contrast"] = empirical_contrast(series.values, result.fit);
        j["fitted"] = result.fit.fitted;
        j["residuals"] = result.residuals;
        o << j.dump(2) << '\n';
    });
    if (!args.fitted_out.empty()) {
        emit(args.fitted_out, out,
             [&](std::ostream& o) { write_fit_table(o, series, result.fit.fitted); });
    }
}

// ---------------------------------------------------------------- experiment

struct ExperimentArgs {
    ProcessArgs process;
    std::size_t n = 2000;
    int degree = 0;
    std::size_t m_max = 0;
    std::vector<std::string> methods{"cdj"};
    std::size_t trials = 100;
    std::uint64_t seed = 0;
    std::size_t threads = 0;
    std::string out = ".";
    std::string prefix = "experiment";
    Format format = Format::Csv;
};

void run_experiment_cmd(const ExperimentArgs& args, std::ostream& out) {
    ExperimentConfig config;
    config.process = make_process(args.process);
    config.n = args.n;
    config.degree = args.degree;
    config.m_max = args.m_max;
    config.trials = args.trials;
    config.base_seed = Seed(args.seed);
    for (const std::string& m : args.methods) {
        config.methods.push_back(parse_method(m, args.degree, args.m_max));
    }
    const RiskReport report = run_experiment(config, RunOptions{args.threads});

    std::filesystem::create_directories(args.out);
    const std::filesystem::path prefix = std::filesystem::path(args.out) / args.prefix;
    write_report_csv(report, prefix);

    const double oracle = median(report.trial_oracle_risk);
    json summary;
    summary["process"] = describe(config.process);
    summary["n"] = report.n;
    summary["m_max"] = report.m_max;
    summary["trials"] = config.trials;
    summary["oracle_m"] = report.oracle_m;
    summary["median_oracle_risk"] = oracle;
    summary["risk_csv"] = prefix.string() + ".risk.csv";
    summary["methods_csv"] = prefix.string() + ".methods.csv";
    json methods = json::array();
    for (const MethodTrials& mt : report.per_method) {
        std::vector<double> risks;
        std::vector<double> ms;
        for (const TrialOutcome& t : mt.trials) {
            if (t.ok()) {
                risks.push_back(t.risk);
                ms.push_back(static_cast<double>(t.m_selected));
            }
        }
        methods.push_back({{"method", mt.name},
                           {"failures", mt.trials.size() - risks.size()},
                           {"median_m", median(ms)},
                           {"median_risk", median(risks)},
                           {"risk_ratio", median(risks) / oracle}});
    }
    summary["methods"] = methods;

    if (args.format == Format::Json) {
        out << summary.dump(2) << '\n';
        return;
    }
    out << "method,failures,median_m,median_risk,median_oracle_risk,risk_ratio\n";
    for (const json& m : methods) {
        out << m["method"].get<std::string>() << ',' << m["failures"].get<std::size_t>() << ','
            << csv_number(m["median_m"].get<double>()) << ','
            << csv_number(m["median_risk"].get<double>()) << ',' << csv_number(oracle) << ','
            << csv_number(m["risk_ratio"].get<double>()) << '\n';
    }
}

// ---------------------------------------------------------------- nile

struct NileArgs {
    std::string data;
    std::string out = "nile_report";
    Format format = Format::Json;
};

json nile_method_json(const NileMethodReport& r) {
    json j = method_result_json(r.spec, r.result);
    j["residual_hurst"] = r.residual_hurst;
    j["residual_acf"] = r.residual_acf;
    return j;
}

void run_nile(const NileArgs& args, std::ostream& out) {
    const SeriesFile series = load_series(args.data);
    const NileReport report = nile_analysis(series);

    const std::filesystem::path dir(args.out);
    std::filesystem::create_directories(dir);
    for (const NileMethodReport* r : {&report.cdj, &report.whywhres}) {
        const std::string name = r->spec.name();
        emit((dir / (name + ".fit.csv")).string(), out,
             [&](std::ostream& o) { write_fit_table(o, series, r->result.fit.fitted); });
        emit((dir / (name + ".acf.csv")).string(), out, [&](std::ostream& o) {
            o << "lag,acf\n";
            for (std::size_t k = 0; k < r->residual_acf.size(); ++k) {
                o << k << ',' << format_exact(r->residual_acf[k]) << '\n';
            }
        });
    }

    if (args.format == Format::Json) {
        json j;
        j["n"] = series.size();
        j["m_max"] = report.m_max;
        j["cdj"] = nile_method_json(report.cdj);
        j["whywhres"] = nile_method_json(report.whywhres);
        const std::string text = j.dump(2) + "\n";
        emit((dir / "summary.json").string(), out, [&](std::ostream& o) { o << text; });
        out << text;
        return;
    }
    std::ostringstream table;
    table << "method,m_selected,kappa_dj,pre_model,H1,H2,residual_H\n";
    for (const NileMethodReport* r : {&report.cdj, &report.whywhres}) {
        const auto& h = r->result.hurst_estimates;
        table << r->spec.name() << ',' << r->result.m_selected << ','
              << format_exact(r->result.kappa_dj) << ','
              << (r->result.pre_model ? std::to_string(*r->result.pre_model) : "") << ','
              << (h.size() > 0 ? format_exact(h[0]) : "") << ','
              << (h.size() > 1 ? format_exact(h[1]) : "") << ','
              << format_exact(r->residual_hurst) << '\n';
    }
    emit((dir / "summary.csv").string(), out, [&](std::ostream& o) { o << table.str(); });
    out << table.str();
}

/// Fills options of `cmd` not given on the command line from a flat
/// `key = value` file (INI or TOML syntax, optional [section] header).
void apply_config(CLI::App& cmd, const std::string& path) {
    if (!std::filesystem::is_regular_file(path)) {
        throw IoError("cannot open config file " + path);
    }
    std::vector<CLI::ConfigItem> items;
    try {
        items = CLI::ConfigTOML().from_file(path);
    } catch (const CLI::Error& e) {
        throw InputError(path + ": " + e.what());
    }
    for (const CLI::ConfigItem& item : items) {
        if (item.name == "++" || item.name == "--") {
            continue;
        }
        if (!item.parents.empty() && item.parents != std::vector<std::string>{cmd.get_name()}) {
            throw InputError(path + ": unknown section '" + item.parents.front() + "'");
        }
        CLI::Option* opt = cmd.get_option_no_throw("--" + item.name);
        if (opt == nullptr || item.name == "config") {
            throw InputError(path + ": unknown key '" + item.name + "'");
        }
        if (opt->count() > 0) {
            continue;
        }
        try {
            opt->add_result(item.inputs);
            opt->run_callback();
        } catch (const CLI::Error& e) {
            throw InputError(path + ": key '" + item.name + "': " + e.what());
        }
    }
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Adaptive piecewise-polynomial regression under dependent errors", "depreg"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "depreg 0.1.0");

    SimulateArgs sim;
    CLI::App* simulate = app.add_subcommand("simulate", "Simulate a series f*(i/n) + noise");
    add_process_options(*simulate, sim.process);
    simulate->add_option("--n", sim.n, "Series length")->capture_default_str();
    simulate->add_option("--seed", sim.seed, "Random seed")->capture_default_str();
    simulate->add_flag("--errors-only", sim.errors_only, "Emit the noise without the signal");
    simulate->add_option("--out", sim.out, "Output file (default: stdout)");

    FitArgs fit;
    CLI::App* fit_cmd = app.add_subcommand("fit", "Least-squares fit on the regular m-partition");
    fit_cmd->add_option("--in", fit.in, "Series file")->required();
    fit_cmd->add_option("--m", fit.m, "Number of cells")->required();
    fit_cmd->add_option("--degree", fit.degree, "Polynomial degree")->capture_default_str();
    add_format_option(*fit_cmd, fit.format);
    fit_cmd->add_option("--out", fit.out, "Output file (default: stdout)");

    SelectArgs sel;
    CLI::App* select = app.add_subcommand("select", "Select the partition size of a series");
    select->add_option("--in", sel.in, "Series file")->required();
    select->add_option("--method", sel.method, "cdj, hgiven:H, why, cdjwhres or whywhres")
        ->capture_default_str();
    select->add_option("--degree", sel.degree, "Polynomial degree")->capture_default_str();
    select->add_option("--mmax,--m_max", sel.m_max, "Largest m (0: automatic)")
        ->capture_default_str();
    add_format_option(*select, sel.format);
    select->add_option("--out", sel.out, "Output file (default: stdout)");
    select->add_option("--fitted-out", sel.fitted_out, "Also write the fitted values table");

    ExperimentArgs exp;
    CLI::App* experiment = app.add_subcommand("experiment", "Monte Carlo risk study");
    std::string config_path;
    experiment->add_option("--config", config_path,
                           "Key-value file; keys are the long option names below");
    add_process_options(*experiment, exp.process);
    experiment->add_option("--n", exp.n, "Sample size")->capture_default_str();
    experiment->add_option("--degree", exp.degree, "Polynomial degree")->capture_default_str();
    experiment->add_option("--m_max,--mmax", exp.m_max, "Largest m (0: automatic)")
        ->capture_default_str();
    experiment->add_option("--methods", exp.methods, "Methods, comma separated")
        ->delimiter(',')
        ->capture_default_str();
    experiment->add_option("--trials", exp.trials, "Number of replicates")->capture_default_str();
    experiment->add_option("--base_seed,--seed", exp.seed, "Base seed")->capture_default_str();
    experiment->add_option("--threads", exp.threads, "Worker threads (0: all cores)")
        ->capture_default_str();
    experiment->add_option("--out", exp.out, "Output directory")->capture_default_str();
    experiment->add_option("--prefix", exp.prefix, "Output file prefix")->capture_default_str();
    add_format_option(*experiment, exp.format);

    NileArgs nile;
    CLI::App* nile_cmd = app.add_subcommand("nile", "CDJ versus Wh(Y)+Wh(Res) on a series file");
    nile_cmd->add_option("--data", nile.data, "Series file (year,value or one value per line)")
        ->required();
    nile_cmd->add_option("--out", nile.out, "Output directory")->capture_default_str();
    add_format_option(*nile_cmd, nile.format);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitInput;
    }

    try {
        if (*experiment && !config_path.empty()) {
            apply_config(*experiment, config_path);
        }
        if (*simulate) {
            run_simulate(sim, out);
        } else if (*fit_cmd) {
            run_fit(fit, out);
        } else if (*select) {
            run_select(sel, out);
        } else if (*experiment) {
            run_experiment_cmd(exp, out);
        } else if (*nile_cmd) {
            run_nile(nile, out);
        }
    } catch (const PipelineError& e) {
        err << "depreg: numerical failure in stage " << e.stage() << ": " << e.what() << '\n';
        return kExitNumerical;
    } catch (const NumericalError& e) {
        err << "depreg: numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const InputError& e) {
        err << "depreg: invalid input: " << e.what() << '\n';
        return kExitInput;
    } catch (const IoError& e) {
        err << "depreg: " << e.what() << '\n';
        return kExitInput;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "depreg: " << e.what() << '\n';
        return kExitInput;
    }
    return kExitOk;
}

}  // namespace depreg::app
