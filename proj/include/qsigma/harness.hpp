#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qsigma/agent.hpp"
#include "qsigma/envs.hpp"

namespace qsigma {

enum class EnvId { RandomWalk19, Windy, StochasticWindy, MovingGoal, MountainCar, CartPole };

/// `randomwalk19`, `windy`, `swg`, `movinggoal`, `mountaincar`, `cartpole`.
EnvId parse_env(const std::string& text);
std::string to_string(EnvId env);

/// Per-environment defaults: equiprobable policy on the random walk,
/// epsilon-greedy(0.1) elsewhere; step caps of 3000 (mountain car),
/// 100000 (cart pole) or 10000; alpha divided by tilings for the
/// tile-coded environments.
AgentConfig default_agent_config(EnvId env);

struct RunSpec {
    EnvId env = EnvId::RandomWalk19;
    AgentConfig agent = default_agent_config(EnvId::RandomWalk19);
    int num_episodes = 50;
    std::uint64_t base_seed = 0;
    std::uint64_t run_index = 0;

    void validate() const;
};

/// Seed of one run: mix_seed(base_seed, run_index). The agent's action
/// stream uses mix_seed(seed, 1) and the environment's mix_seed(seed, 2),
/// so runs with equal (base_seed, run_index) share random numbers across
/// schemes and step sizes.
std::uint64_t run_seed(std::uint64_t base_seed, std::uint64_t run_index);

struct EpisodeSummary {
    double total_return = 0.0;
    long steps = 0;
    bool terminated = false;
    double mean_sigma = 0.0;
    double max_abs_td = 0.0;
    /// RMS error of state values after the episode; random walk only.
    std::optional<double> rms;
};

struct RunRecord {
    std::uint64_t seed = 0;
    std::vector<EpisodeSummary> episodes;
    /// (episode number at the change, new goal); moving goal only.
    std::vector<std::pair<int, Cell>> goal_changes;
};

enum class Metric { Return, Steps, Rms, Sigma };
Metric parse_metric(const std::string& text);
std::string to_string(Metric m);
std::vector<double> metric_series(const RunRecord& record, Metric metric);

/// Runs num_episodes episodes on a fresh environment and learner. A
/// divergence is rethrown as DivergedError naming run, episode and step.
RunRecord run_experiment(const RunSpec& spec);

/// run_experiment for run indices 0..num_runs-1 on up to `threads` worker
/// threads (0 = hardware concurrency). Results are ordered by run index.
std::vector<RunRecord> run_many(const RunSpec& spec, int num_runs, int threads = 0);

/// Mean computed as s0 + sum(s_i - s0) / n.
/// Exactly s0 when all values are equal.
double shifted_mean(std::span<const double> values);

// --- statistics ------------------------------------------------------------

double rms_error(std::span<const double> estimates, std::span<const double> truth);

/// Two-sided normal quantile: z with P(|Z| <= z) = level.
double normal_quantile(double level);

struct AggregateCurve {
    std::vector<double> mean;
    /// NaN when fewer than two runs.
    std::vector<double> std_error;
    std::vector<double> half_width;
    std::size_t runs = 0;
    double confidence = 0.99;

    std::size_t size() const noexcept { return mean.size(); }
};

AggregateCurve aggregate(std::span<const std::vector<double>> series, double confidence);

/// Trailing window mean: out[i] = mean(series[max(0, i-window+1) ..= i]).
std::vector<double> moving_average(std::span<const double> series, int window);

/// Mean and standard error of per-run scalars. Standard error is NaN for n < 2.
struct Estimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t n = 0;
};
Estimate estimate(std::span<const double> samples);

// --- sweeps ----------------------------------------------------------------

enum class Objective { AucRms, MeanReturn, TotalReturn, FinalReturn };
Objective parse_objective(const std::string& text);
std::string to_string(Objective o);
bool lower_is_better(Objective o);
/// auc_rms is the plain sum of per-episode RMS values.
double objective_value(const RunRecord& record, Objective objective);

struct SweepSpec {
    RunSpec base;
    std::vector<double> lambdas;
    std::vector<double> alphas;
    std::vector<SigmaScheme> schemes;
    int num_runs = 10;
    Objective objective = Objective::MeanReturn;
    int threads = 0;

    void validate() const;
};

struct SweepCell {
    std::string scheme;
    double lambda = 0.0;
    double alpha = 0.0;
    double objective = 0.0;
    double std_error = 0.0;
};

struct SweepTable {
    Objective objective = Objective::MeanReturn;
    std::vector<SweepCell> cells;

    /// Best cell for every scheme, in first-appearance order.
    std::vector<SweepCell> best_per_scheme() const;
};

/// Evaluates every (scheme, lambda, alpha) cell over num_runs runs. Each
/// cell reuses run indices 0..num_runs-1, so cells share random numbers.
SweepTable run_sweep(const SweepSpec& spec);

// --- CSV -------------------------------------------------------------------

/// Shortest representation that parses back to the same double.
std::string format_real(double v);

/// `episode,mean,stderr,ci_halfwidth`, one row per episode (1-based);
/// statistics columns are empty when undefined.
void write_curve_csv(std::ostream& os, const AggregateCurve& curve);
AggregateCurve read_curve_csv(std::istream& is);

/// `scheme,lambda,alpha,objective,stderr`
void write_sweep_csv(std::ostream& os, const SweepTable& table);
SweepTable read_sweep_csv(std::istream& is);

}  // namespace qsigma
