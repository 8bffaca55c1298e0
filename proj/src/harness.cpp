#include "qsigma/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <istream>
#include <limits>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <boost/math/distributions/normal.hpp>

namespace qsigma {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

EnvId parse_env(const std::string& text) {
    if (text == "randomwalk19") return EnvId::RandomWalk19;
    if (text == "windy") return EnvId::Windy;
    if (text == "swg") return EnvId::StochasticWindy;
    if (text == "movinggoal") return EnvId::MovingGoal;
    if (text == "mountaincar") return EnvId::MountainCar;
    if (text == "cartpole") return EnvId::CartPole;
    throw std::invalid_argument("unknown environment '" + text + "'");
}

std::string to_string(EnvId env) {
    switch (env) {
        case EnvId::RandomWalk19: return "randomwalk19";
        case EnvId::Windy: return "windy";
        case EnvId::StochasticWindy: return "swg";
        case EnvId::MovingGoal: return "movinggoal";
        case EnvId::MountainCar: return "mountaincar";
        case EnvId::CartPole: return "cartpole";
    }
    return "?";
}

AgentConfig default_agent_config(EnvId env) {
    AgentConfig c;
    c.gamma = 1.0;
    switch (env) {
        case EnvId::RandomWalk19:
            c.policy = Equiprobable{};
            c.scheme = SigmaScheme::dynamic_decay(1.0, 0.95);
            c.lambda = 0.7;
            c.alpha = 0.9;
            break;
        case EnvId::Windy:
        case EnvId::StochasticWindy:
        case EnvId::MovingGoal:
            c.policy = EpsilonGreedy{0.1};
            break;
        case EnvId::MountainCar:
            c.policy = EpsilonGreedy{0.1};
            c.max_steps_per_episode = 3000;
            c.divide_alpha_by_tilings = true;
            c.lambda = 0.1;
            break;
        case EnvId::CartPole:
            c.policy = EpsilonGreedy{0.1};
            c.max_steps_per_episode = 100000;
            c.divide_alpha_by_tilings = true;
            break;
    }
    return c;
}

void RunSpec::validate() const {
    agent.validate();
    if (num_episodes < 1) throw std::invalid_argument("num_episodes must be >= 1");
}

std::uint64_t run_seed(std::uint64_t base_seed, std::uint64_t run_index) {
    return mix_seed(base_seed, run_index);
}

double shifted_mean(std::span<const double> values) {
    if (values.empty()) return kNaN;
    const double first = values.front();
    double acc = 0.0;
    for (double v : values) acc += v - first;
    return first + acc / static_cast<double>(values.size());
}

Metric parse_metric(const std::string& text) {
    if (text == "return") return Metric::Return;
    if (text == "steps") return Metric::Steps;
    if (text == "rms") return Metric::Rms;
    if (text == "sigma") return Metric::Sigma;
    throw std::invalid_argument("unknown metric '" + text + "'");
}

std::string to_string(Metric m) {
    switch (m) {
        case Metric::Return: return "return";
        case Metric::Steps: return "steps";
        case Metric::Rms: return "rms";
        case Metric::Sigma: return "sigma";
    }
    return "?";
}

std::vector<double> metric_series(const RunRecord& record, Metric metric) {
    std::vector<double> out;
    out.reserve(record.episodes.size());
    for (const auto& e : record.episodes) {
        switch (metric) {
            case Metric::Return: out.push_back(e.total_return); break;
            case Metric::Steps: out.push_back(static_cast<double>(e.steps)); break;
            case Metric::Sigma: out.push_back(e.mean_sigma); break;
            case Metric::Rms:
                if (!e.rms) throw std::invalid_argument("rms is only recorded for randomwalk19");
                out.push_back(*e.rms);
                break;
        }
    }
    return out;
}

// --- runs ------------------------------------------------------------------

namespace {

template <class Env, class QFunc>
RunRecord run_loop(Env& env, QFunc& q, const RunSpec& spec, std::uint64_t seed) {
    RunRecord record;
    record.seed = seed;
    record.episodes.reserve(static_cast<std::size_t>(spec.num_episodes));

    Rng rng(mix_seed(seed, 1));
    SigmaScheme scheme = spec.agent.scheme;
    scheme.reset();
    EligibilityTrace trace(q.parameter_count());

    static const std::vector<double> truth = randomwalk_true_values();

    for (int ep = 0; ep < spec.num_episodes; ++ep) {
        EpisodeResult r;
        try {
            r = run_episode(env, q, trace, scheme, spec.agent, rng);
        } catch (const DivergedError& e) {
            std::ostringstream os;
            os << "diverged at run " << spec.run_index << ", episode " << ep + 1 << ", step "
               << e.step();
            throw DivergedError(os.str(), e.step());
        }
        EpisodeSummary s;
        s.total_return = r.total_return;
        s.steps = r.steps;
        s.terminated = r.terminated;
        s.mean_sigma = shifted_mean(r.sigmas);
        for (double d : r.td_errors) s.max_abs_td = std::max(s.max_abs_td, std::abs(d));
        if constexpr (std::is_same_v<Env, RandomWalk19>) {
            const auto v = state_values_from_q(q, spec.agent.policy);
            s.rms = rms_error(std::span<const double>(v).subspan(1, RandomWalk19::kNumInterior), truth);
        }
        record.episodes.push_back(s);
    }
    if constexpr (std::is_same_v<Env, MovingGoalGrid>) {
        for (const auto& [counter, goal] : env.goal_changes()) record.goal_changes.emplace_back(counter, goal);
    }
    return record;
}

}  // namespace

RunRecord run_experiment(const RunSpec& spec) {
    spec.validate();
    const std::uint64_t seed = run_seed(spec.base_seed, spec.run_index);
    const std::uint64_t env_seed = mix_seed(seed, 2);
    switch (spec.env) {
        case EnvId::RandomWalk19: {
            RandomWalk19 env;
            TabularQ q(env.num_states(), env.num_actions());
            return run_loop(env, q, spec, seed);
        }
        case EnvId::Windy:
        case EnvId::StochasticWindy: {
            WindyGrid env(spec.env == EnvId::StochasticWindy, env_seed);
            TabularQ q(env.num_states(), env.num_actions());
            return run_loop(env, q, spec, seed);
        }
        case EnvId::MovingGoal: {
            MovingGoalGrid env(env_seed);
            TabularQ q(env.num_states(), env.num_actions());
            return run_loop(env, q, spec, seed);
        }
        case EnvId::MountainCar: {
            MountainCar env(env_seed);
            LinearQ q(TileCoderConfig::mountain_car(), env.num_actions());
            return run_loop(env, q, spec, seed);
        }
        case EnvId::CartPole: {
            CartPole env(env_seed);
            LinearQ q(TileCoderConfig::cart_pole(), env.num_actions());
            return run_loop(env, q, spec, seed);
        }
    }
    throw std::invalid_argument("unknown environment");
}

std::vector<RunRecord> run_many(const RunSpec& spec, int num_runs, int threads) {
    if (num_runs < 1) throw std::invalid_argument("num_runs must be >= 1");
    spec.validate();
    std::vector<RunRecord> out(static_cast<std::size_t>(num_runs));

    unsigned workers = threads > 0 ? static_cast<unsigned>(threads) : std::thread::hardware_concurrency();
    workers = std::clamp(workers, 1U, static_cast<unsigned>(num_runs));

    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        for (int i = next++; i < num_runs; i = next++) {
            try {
                RunSpec s = spec;
                s.run_index = static_cast<std::uint64_t>(i);
                out[static_cast<std::size_t>(i)] = run_experiment(s);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = num_runs;
            }
        }
    };

    if (workers == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    if (failure) std::rethrow_exception(failure);
    return out;
}

// --- statistics ------------------------------------------------------------

double rms_error(std::span<const double> estimates, std::span<const double> truth) {
    if (estimates.size() != truth.size()) throw std::invalid_argument("rms_error length mismatch");
    if (estimates.empty()) throw std::invalid_argument("rms_error of empty vectors");
    double acc = 0.0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const double d = estimates[i] - truth[i];
        acc += d * d;
    }
    return std::sqrt(acc / static_cast<double>(truth.size()));
}

double normal_quantile(double level) {
    if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("confidence level must lie in (0,1)");
    return boost::math::quantile(boost::math::normal_distribution<double>(), 0.5 + level / 2.0);
}

Estimate estimate(std::span<const double> samples) {
    Estimate e;
    e.n = samples.size();
    if (samples.empty()) {
        e.mean = kNaN;
        e.std_error = kNaN;
        return e;
    }
    double sum = 0.0;
    for (double v : samples) sum += v;
    e.mean = sum / static_cast<double>(e.n);
    if (e.n < 2) {
        e.std_error = kNaN;
        return e;
    }
    double ss = 0.0;
    for (double v : samples) ss += (v - e.mean) * (v - e.mean);
    e.std_error = std::sqrt(ss / static_cast<double>(e.n - 1)) / std::sqrt(static_cast<double>(e.n));
    return e;
}

AggregateCurve aggregate(std::span<const std::vector<double>> series, double confidence) {
    if (series.empty()) throw std::invalid_argument("aggregate needs at least one series");
    const std::size_t len = series.front().size();
    for (const auto& s : series)
        if (s.size() != len) throw std::invalid_argument("ragged series");
    const double z = normal_quantile(confidence);

    AggregateCurve c;
    c.runs = series.size();
    c.confidence = confidence;
    c.mean.resize(len);
    c.std_error.resize(len);
    c.half_width.resize(len);
    std::vector<double> column(series.size());
    for (std::size_t i = 0; i < len; ++i) {
        for (std::size_t r = 0; r < series.size(); ++r) column[r] = series[r][i];
        const auto e = estimate(column);
        c.mean[i] = e.mean;
        c.std_error[i] = e.std_error;
        c.half_width[i] = std::isnan(e.std_error) ? kNaN : z * e.std_error;
    }
    return c;
}

std::vector<double> moving_average(std::span<const double> series, int window) {
    if (window < 1) throw std::invalid_argument("window must be >= 1");
    std::vector<double> out(series.size());
    const auto w = static_cast<std::size_t>(window);
    for (std::size_t i = 0; i < series.size(); ++i) {
        const std::size_t lo = i + 1 >= w ? i + 1 - w : 0;
        double sum = 0.0;
        for (std::size_t k = lo; k <= i; ++k) sum += series[k];
        out[i] = sum / static_cast<double>(i - lo + 1);
    }
    return out;
}

// --- sweeps ----------------------------------------------------------------

Objective parse_objective(const std::string& text) {
    if (text == "auc_rms") return Objective::AucRms;
    if (text == "mean_return") return Objective::MeanReturn;
    if (text == "total_return") return Objective::TotalReturn;
    if (text == "final_return") return Objective::FinalReturn;
    throw std::invalid_argument("unknown objective '" + text + "'");
}

std::string to_string(Objective o) {
    switch (o) {
        case Objective::AucRms: return "auc_rms";
        case Objective::MeanReturn: return "mean_return";
        case Objective::TotalReturn: return "total_return";
        case Objective::FinalReturn: return "final_return";
    }
    return "?";
}

bool lower_is_better(Objective o) { return o == Objective::AucRms; }

double objective_value(const RunRecord& record, Objective objective) {
    if (record.episodes.empty()) throw std::invalid_argument("empty run record");
    double total = 0.0;
    switch (objective) {
        case Objective::AucRms:
            for (const auto& e : record.episodes) {
                if (!e.rms) throw std::invalid_argument("auc_rms needs an environment with true values");
                total += *e.rms;
            }
            return total;
        case Objective::MeanReturn:
        case Objective::TotalReturn:
            for (const auto& e : record.episodes) total += e.total_return;
            return objective == Objective::TotalReturn
                       ? total
                       : total / static_cast<double>(record.episodes.size());
        case Objective::FinalReturn:
            return record.episodes.back().total_return;
    }
    return kNaN;
}

void SweepSpec::validate() const {
    base.validate();
    if (lambdas.empty() || alphas.empty() || schemes.empty()) throw std::invalid_argument("empty sweep grid");
    if (num_runs < 1) throw std::invalid_argument("num_runs must be >= 1");
}

SweepTable run_sweep(const SweepSpec& spec) {
    spec.validate();
    SweepTable table;
    table.objective = spec.objective;
    for (const auto& scheme : spec.schemes) {
        for (double lambda : spec.lambdas) {
            for (double alpha : spec.alphas) {
                RunSpec run = spec.base;
                run.agent.scheme = scheme;
                run.agent.lambda = lambda;
                run.agent.alpha = alpha;
                const auto records = run_many(run, spec.num_runs, spec.threads);
                std::vector<double> values;
                values.reserve(records.size());
                for (const auto& r : records) values.push_back(objective_value(r, spec.objective));
                const auto e = estimate(values);
                table.cells.push_back({scheme.to_string(), lambda, alpha, e.mean, e.std_error});
            }
        }
    }
    return table;
}

std::vector<SweepCell> SweepTable::best_per_scheme() const {
    std::vector<SweepCell> best;
    for (const auto& cell : cells) {
        auto it = std::find_if(best.begin(), best.end(), [&](const SweepCell& b) { return b.scheme == cell.scheme; });
        if (it == best.end()) {
            best.push_back(cell);
            continue;
        }
        const bool better = lower_is_better(objective) ? cell.objective < it->objective
                                                       : cell.objective > it->objective;
        if (better) *it = cell;
    }
    return best;
}

// --- CSV -------------------------------------------------------------------

std::string format_real(double v) {
    if (std::isnan(v)) return "";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

namespace {

double parse_real_field(const std::string& field) {
    if (field.empty()) return kNaN;
    double v = 0.0;
    const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
    if (res.ec != std::errc{} || res.ptr != field.data() + field.size())
        throw std::invalid_argument("bad number '" + field + "' in CSV");
    return v;
}

std::vector<std::string> split_row(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

void write_curve_csv(std::ostream& os, const AggregateCurve& curve) {
    os << "episode,mean,stderr,ci_halfwidth\n";
    for (std::size_t i = 0; i < curve.size(); ++i) {
        os << i + 1 << ',' << format_real(curve.mean[i]) << ',' << format_real(curve.std_error[i]) << ','
           << format_real(curve.half_width[i]) << '\n';
    }
}

AggregateCurve read_curve_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line != "episode,mean,stderr,ci_halfwidth")
        throw std::invalid_argument("missing curve CSV header");
    AggregateCurve c;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto f = split_row(line);
        if (f.size() != 4) throw std::invalid_argument("curve CSV row needs 4 fields");
        c.mean.push_back(parse_real_field(f[1]));
        c.std_error.push_back(parse_real_field(f[2]));
        c.half_width.push_back(parse_real_field(f[3]));
    }
    return c;
}

void write_sweep_csv(std::ostream& os, const SweepTable& table) {
    os << "scheme,lambda,alpha,objective,stderr\n";
    for (const auto& c : table.cells) {
        os << c.scheme << ',' << format_real(c.lambda) << ',' << format_real(c.alpha) << ','
           << format_real(c.objective) << ',' << format_real(c.std_error) << '\n';
    }
}

SweepTable read_sweep_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line != "scheme,lambda,alpha,objective,stderr")
        throw std::invalid_argument("missing sweep CSV header");
    SweepTable t;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto f = split_row(line);
        if (f.size() != 5) throw std::invalid_argument("sweep CSV row needs 5 fields");
        t.cells.push_back({f[0], parse_real_field(f[1]), parse_real_field(f[2]), parse_real_field(f[3]),
                           parse_real_field(f[4])});
    }
    return t;
}

}  // namespace qsigma
