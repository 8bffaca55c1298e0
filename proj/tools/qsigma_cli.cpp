// Command-line front end over the C API.
//
//   qsigma run    [--config FILE] [flags]      aggregated per-episode curve
//   qsigma sweep  [--config FILE] [flags]      (scheme, lambda, alpha) grid
//   qsigma figure <id|list> [--out DIR] [...]  canned figure presets
//
// Settings come from the config file first; command-line flags override it.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <map>
#include <memory>
#include <string>

#include "qsigma/qsigma.h"

namespace {

struct ConfigDeleter {
    void operator()(qsigma_config* c) const { qsigma_config_destroy(c); }
};
struct CurveDeleter {
    void operator()(qsigma_curve* c) const { qsigma_curve_destroy(c); }
};
struct SweepDeleter {
    void operator()(qsigma_sweep* s) const { qsigma_sweep_destroy(s); }
};

int report(qsigma_status status) {
    if (status != QSIGMA_OK) std::cerr << "qsigma: " << qsigma_last_error() << '\n';
    return static_cast<int>(status);
}

// Flag values keyed by config key; only flags given on the command line
// are forwarded so the config file keeps the rest.
struct Flags {
    std::string config_file;
    std::map<std::string, std::string> values;

    void add(CLI::App& app, const std::string& key, const std::string& help) {
        app.add_option("--" + key, values[key], help);
    }
};

void add_experiment_flags(CLI::App& app, Flags& f) {
    app.add_option("--config", f.config_file, "key=value settings file; flags override it")
        ->check(CLI::ExistingFile);
    f.add(app, "env", "randomwalk19 | windy | swg | movinggoal | mountaincar | cartpole");
    f.add(app, "scheme", "constant:S | decay:S0:F | tderror:max | tderror:mean | combined:F (comma list for sweep)");
    f.add(app, "lambda", "trace decay (comma list for sweep)");
    f.add(app, "alpha", "step size (comma list for sweep)");
    f.add(app, "epsilon", "epsilon-greedy exploration rate");
    f.add(app, "gamma", "discount factor");
    f.add(app, "episodes", "episodes per run");
    f.add(app, "runs", "independent runs");
    f.add(app, "seed", "base seed");
    f.add(app, "confidence", "confidence level of the interval half-width");
    f.add(app, "smooth-window", "trailing moving-average window applied per run");
    f.add(app, "metric", "return | steps | rms | sigma");
    f.add(app, "objective", "auc_rms | mean_return | total_return | final_return");
    f.add(app, "threads", "worker threads (0 = all cores)");
    f.add(app, "max-steps", "step cap per episode");
    f.add(app, "policy", "egreedy:E | equiprobable");
}

std::unique_ptr<qsigma_config, ConfigDeleter> build_config(CLI::App& app, const Flags& f, int& status) {
    qsigma_config* raw = nullptr;
    status = report(qsigma_config_create(&raw));
    std::unique_ptr<qsigma_config, ConfigDeleter> cfg(raw);
    if (status != 0) return cfg;
    if (!f.config_file.empty() && (status = report(qsigma_config_load_file(cfg.get(), f.config_file.c_str()))) != 0)
        return cfg;
    for (const auto& [key, value] : f.values) {
        if (app.count("--" + key) == 0) continue;
        if ((status = report(qsigma_config_set(cfg.get(), key.c_str(), value.c_str()))) != 0) return cfg;
    }
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Q(sigma, lambda) experiments"};
    app.require_subcommand(1);
    app.set_version_flag("--version", qsigma_version());

    Flags run_flags, sweep_flags, figure_flags;
    std::string run_out = "-", sweep_out = "-", figure_out = ".", figure_id;

    auto* run = app.add_subcommand("run", "run one experiment and write its curve CSV");
    add_experiment_flags(*run, run_flags);
    run->add_option("--out", run_out, "output CSV path ('-' for stdout)");

    auto* sweep = app.add_subcommand("sweep", "evaluate a scheme x lambda x alpha grid");
    add_experiment_flags(*sweep, sweep_flags);
    sweep->add_option("--out", sweep_out, "output CSV path ('-' for stdout)");

    auto* figure = app.add_subcommand("figure", "run a canned figure preset ('list' to show them)");
    figure->add_option("id", figure_id, "preset id")->required();
    figure->add_option("--out", figure_out, "output directory");
    figure->add_option("--config", figure_flags.config_file, "key=value settings file")->check(CLI::ExistingFile);
    figure_flags.add(*figure, "runs", "override the preset's run count");
    figure_flags.add(*figure, "episodes", "override the preset's episode count");
    figure_flags.add(*figure, "seed", "base seed");
    figure_flags.add(*figure, "confidence", "override the preset's confidence level");
    figure_flags.add(*figure, "smooth-window", "override the preset's smoothing window");
    figure_flags.add(*figure, "threads", "worker threads (0 = all cores)");

    CLI11_PARSE(app, argc, argv);

    int status = 0;
    if (*run) {
        auto cfg = build_config(*run, run_flags, status);
        if (status != 0) return status;
        qsigma_curve* raw = nullptr;
        if ((status = report(qsigma_run(cfg.get(), &raw))) != 0) return status;
        std::unique_ptr<qsigma_curve, CurveDeleter> curve(raw);
        return report(qsigma_curve_write_csv(curve.get(), run_out.c_str()));
    }
    if (*sweep) {
        auto cfg = build_config(*sweep, sweep_flags, status);
        if (status != 0) return status;
        qsigma_sweep* raw = nullptr;
        if ((status = report(qsigma_sweep_run(cfg.get(), &raw))) != 0) return status;
        std::unique_ptr<qsigma_sweep, SweepDeleter> table(raw);
        return report(qsigma_sweep_write_csv(table.get(), sweep_out.c_str()));
    }
    if (figure_id == "list") {
        for (size_t i = 0; i < qsigma_figure_count(); ++i)
            std::cout << qsigma_figure_id(i) << '\t' << qsigma_figure_description(i) << '\n';
        return 0;
    }
    auto cfg = build_config(*figure, figure_flags, status);
    if (status != 0) return status;
    return report(qsigma_figure_run(figure_id.c_str(), cfg.get(), figure_out.c_str()));
}
