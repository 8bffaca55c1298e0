#include "qsigma/figures.hpp"

#include <sstream>
#include <stdexcept>

namespace qsigma {

namespace {

std::vector<double> grid(std::initializer_list<double> v) { return v; }

FigurePreset curve(std::string id, std::string description, EnvId env, int runs, int episodes,
                   double confidence, Metric metric, std::vector<CurveSeries> series,
                   int smooth_window = 1) {
    FigurePreset f;
    f.id = std::move(id);
    f.description = std::move(description);
    f.env = env;
    f.runs = runs;
    f.episodes = episodes;
    f.confidence = confidence;
    f.metric = metric;
    f.series = std::move(series);
    f.smooth_window = smooth_window;
    return f;
}

FigurePreset sweep(std::string id, std::string description, EnvId env, int runs, int episodes,
                   std::vector<SigmaScheme> schemes, std::vector<double> lambdas, std::vector<double> alphas,
                   Objective objective) {
    FigurePreset f;
    f.id = std::move(id);
    f.description = std::move(description);
    f.env = env;
    f.runs = runs;
    f.episodes = episodes;
    SweepSpec s;
    s.base.env = env;
    s.base.agent = default_agent_config(env);
    s.base.num_episodes = episodes;
    s.schemes = std::move(schemes);
    s.lambdas = std::move(lambdas);
    s.alphas = std::move(alphas);
    s.num_runs = runs;
    s.objective = objective;
    f.sweep = std::move(s);
    return f;
}

std::vector<FigurePreset> build_presets() {
    const auto decay95 = SigmaScheme::dynamic_decay(1.0, 0.95);
    const auto decay99 = SigmaScheme::dynamic_decay(1.0, 0.99);
    const auto td = SigmaScheme::td_error_max();
    const auto lambdas = grid({0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9});
    const auto alphas = grid({0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9});

    std::vector<FigurePreset> p;
    p.push_back(curve("2", "random walk RMS error, decay(0.95) vs td-error", EnvId::RandomWalk19, 1000, 50, 0.99,
                      Metric::Rms, {{"decay", decay95, 0.7, 0.9}, {"tderror", td, 0.7, 0.8}}));
    p.push_back(curve("3", "random walk RMS error including the combined scheme", EnvId::RandomWalk19, 10000, 50,
                      0.99, Metric::Rms,
                      {{"decay", decay95, 0.7, 0.9},
                       {"tderror", td, 0.7, 0.8},
                       {"combined", SigmaScheme::combined(0.95), 0.7, 0.8}}));
    p.push_back(sweep("4", "stochastic windy grid, decay factors at lambda 0.7", EnvId::StochasticWindy, 1000, 100,
                      {decay99, decay95, SigmaScheme::dynamic_decay(1.0, 0.8), SigmaScheme::dynamic_decay(1.0, 0.5),
                       SigmaScheme::dynamic_decay(1.0, 0.2)},
                      {0.7}, alphas, Objective::MeanReturn));
    p.push_back(sweep("5", "stochastic windy grid, lambda x alpha grid", EnvId::StochasticWindy, 1000, 100,
                      {decay99, td}, lambdas, alphas, Objective::MeanReturn));
    p.push_back(curve("6", "stochastic windy grid return per episode", EnvId::StochasticWindy, 1000, 100, 0.99,
                      Metric::Return, {{"decay", decay99, 0.7, 0.5}, {"tderror", td, 0.7, 0.5}}));
    p.push_back(curve("7", "moving goal windy grid return per episode", EnvId::MovingGoal, 1000, 100, 0.99,
                      Metric::Return, {{"decay", decay95, 0.8, 0.6}, {"tderror", td, 0.6, 0.8}}));
    p.push_back(curve("8", "mountain car return per episode", EnvId::MountainCar, 500, 300, 0.95, Metric::Return,
                      {{"decay", decay95, 0.1, 0.5}, {"tderror", td, 0.1, 0.5}}));
    p.push_back(curve("10", "cart pole return per episode, smoothed", EnvId::CartPole, 100, 200, 0.70,
                      Metric::Return, {{"decay", decay95, 0.7, 0.5}, {"tderror", td, 0.7, 0.5}}, 30));
    p.push_back(curve("10b", "cart pole early learning", EnvId::CartPole, 10000, 50, 0.99, Metric::Return,
                      {{"decay", decay95, 0.7, 0.5}, {"tderror", td, 0.7, 0.5}}));
    p.push_back(curve("11", "cart pole per-episode mean sigma, single run", EnvId::CartPole, 1, 200, 0.99,
                      Metric::Sigma, {{"decay", decay95, 0.7, 0.5}, {"tderror", td, 0.7, 0.5}}));
    return p;
}

}  // namespace

const std::vector<FigurePreset>& figure_presets() {
    static const std::vector<FigurePreset> presets = build_presets();
    return presets;
}

const FigurePreset& find_figure(const std::string& id) {
    for (const auto& f : figure_presets())
        if (f.id == id) return f;
    throw std::invalid_argument("unknown figure '" + id + "'");
}

AggregateCurve run_curve(const RunSpec& spec, int runs, Metric metric, double confidence, int smooth_window,
                         int threads) {
    const auto records = run_many(spec, runs, threads);
    std::vector<std::vector<double>> series;
    series.reserve(records.size());
    for (const auto& r : records) {
        auto s = metric_series(r, metric);
        if (smooth_window > 1) s = moving_average(s, smooth_window);
        series.push_back(std::move(s));
    }
    return aggregate(series, confidence);
}

std::vector<FigureFile> run_figure(const std::string& id, const FigureOptions& options) {
    const FigurePreset& preset = find_figure(id);
    const int runs = options.runs.value_or(preset.runs);
    const int episodes = options.episodes.value_or(preset.episodes);
    std::vector<FigureFile> files;

    if (preset.sweep) {
        SweepSpec s = *preset.sweep;
        s.num_runs = runs;
        s.base.num_episodes = episodes;
        s.base.base_seed = options.seed;
        s.threads = options.threads;
        std::ostringstream os;
        write_sweep_csv(os, run_sweep(s));
        files.push_back({"fig" + id + "_sweep.csv", os.str()});
        return files;
    }

    for (const auto& series : preset.series) {
        RunSpec spec;
        spec.env = preset.env;
        spec.agent = default_agent_config(preset.env);
        spec.agent.scheme = series.scheme;
        spec.agent.lambda = series.lambda;
        spec.agent.alpha = series.alpha;
        spec.num_episodes = episodes;
        spec.base_seed = options.seed;
        const auto c = run_curve(spec, runs, preset.metric, options.confidence.value_or(preset.confidence),
                                 options.smooth_window.value_or(preset.smooth_window), options.threads);
        std::ostringstream os;
        write_curve_csv(os, c);
        files.push_back({"fig" + id + "_" + series.label + ".csv", os.str()});
    }
    return files;
}

}  // namespace qsigma
