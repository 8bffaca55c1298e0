#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <type_traits>
#include <vector>

#include "qsigma/core.hpp"
#include "qsigma/sigma.hpp"
#include "qsigma/tilecoding.hpp"

namespace qsigma {

struct AgentConfig {
    double alpha = 0.5;
    double gamma = 1.0;
    double lambda = 0.7;
    PolicyKind policy = EpsilonGreedy{0.1};
    SigmaScheme scheme = SigmaScheme::td_error_max();
    long max_steps_per_episode = 10000;
    /// Use alpha / features-per-pair as the step size (tile coding).
    bool divide_alpha_by_tilings = false;

    void validate() const;
};

struct EpisodeResult {
    double total_return = 0.0;
    long steps = 0;
    bool terminated = false;  ///< false when the step cap ended the episode
    std::vector<double> td_errors;
    std::vector<double> sigmas;
};

/// r + gamma * (sigma * q_next_sampled + (1 - sigma) * v_next_expected) - q_current
double td_error(double reward, double gamma, double sigma, double q_next_sampled,
                double v_next_expected, double q_current);

/// gamma * lambda * (sigma + (1 - sigma) * pi_next)
double trace_decay_factor(double gamma, double lambda, double sigma, double pi_next);

/// Accumulating eligibility trace over a flat parameter vector.
///
/// Storage is dense; the indices of non-zero entries are tracked so decay
/// and updates only visit those. Entries are dropped from the active set
/// only once they are exactly zero, so results equal a dense sweep.
class EligibilityTrace {
public:
    explicit EligibilityTrace(std::size_t size = 0);

    void clear();
    void accumulate(std::size_t index, double amount = 1.0);
    void decay(double factor);

    double operator[](std::size_t i) const { return values_[i]; }
    std::size_t size() const noexcept { return values_.size(); }
    std::span<const std::size_t> active() const noexcept { return active_; }
    std::span<const double> values() const noexcept { return values_; }

private:
    std::vector<double> values_;
    std::vector<std::size_t> active_;
    std::vector<unsigned char> is_active_;
};

/// Dense [state x action] table, zero-initialised.
class TabularQ {
public:
    using Encoded = int;

    TabularQ(int num_states, int num_actions);

    int num_states() const noexcept { return num_states_; }
    int num_actions() const noexcept { return num_actions_; }
    std::size_t parameter_count() const noexcept { return table_.size(); }
    int features_per_pair() const noexcept { return 1; }

    Encoded encode(int observation) const;
    std::span<const double> values(Encoded s) const;
    double value(Encoded s, int a) const { return table_[index(s, a)]; }
    double& at(int s, int a) { return table_[index(s, a)]; }

    void accumulate(EligibilityTrace& trace, Encoded s, int a) const { trace.accumulate(index(s, a)); }
    /// table += step * trace over the active entries; false if any
    /// touched entry became non-finite.
    bool apply(const EligibilityTrace& trace, double step);

    std::span<const double> table() const noexcept { return table_; }

private:
    std::size_t index(int s, int a) const noexcept {
        return static_cast<std::size_t>(s) * static_cast<std::size_t>(num_actions_) +
               static_cast<std::size_t>(a);
    }

    int num_states_;
    int num_actions_;
    std::vector<double> table_;
};

/// Linear action values over hashed tile-coded binary features. Each
/// action gets its own block through the tile coder's integer inputs.
class LinearQ {
public:
    /// Active feature indices for every action, action-major.
    struct Encoded {
        std::vector<std::size_t> features;
        std::vector<double> values;
    };

    LinearQ(TileCoderConfig config, int num_actions);

    int num_actions() const noexcept { return num_actions_; }
    int features_per_pair() const noexcept { return config_.num_tilings; }
    std::size_t parameter_count() const noexcept { return weights_.size(); }

    Encoded encode(std::span<const double> observation);
    std::span<const double> values(const Encoded& e) const { return e.values; }
    /// Recomputed from the current weights.
    double value(const Encoded& e, int a) const;
    std::span<const std::size_t> features(const Encoded& e, int a) const;

    void accumulate(EligibilityTrace& trace, const Encoded& e, int a) const;
    bool apply(const EligibilityTrace& trace, double step);

    std::span<const double> weights() const noexcept { return weights_; }
    const IndexHashTable& index_table() const noexcept { return iht_; }
    const TileCoderConfig& config() const noexcept { return config_; }

private:
    TileCoderConfig config_;
    int num_actions_;
    IndexHashTable iht_;
    std::vector<double> weights_;
};

/// Per-state value sum_a pi(a|s) Q(s,a) for every row of a tabular Q.
std::vector<double> state_values_from_q(const TabularQ& q, const PolicyKind& policy);

namespace detail {
template <class QFunc, class Obs>
auto encode(QFunc& q, const Obs& obs) {
    if constexpr (std::is_same_v<QFunc, LinearQ>)
        return q.encode(std::span<const double>(obs.data(), obs.size()));
    else
        return q.encode(obs);
}
}  // namespace detail

/// One episode of Q(sigma, lambda) with accumulating traces.
///
/// Per step: act and observe; select A' and form V' under the current
/// policy at S'; delta with the sigma in force at the start of the step;
/// report delta to the scheme (its new sigma applies from the next step);
/// E(S,A) += 1 (or += features); Q += alpha*delta*E; E *= decay factor.
/// On a terminal S' no action is drawn and the bootstrap terms are zero.
/// The episode ends on termination or at max_steps_per_episode, and in both
/// cases the scheme and environment episode hooks run.
///
/// RNG use: one draw for A0, then one draw per non-terminal step for A'.
template <class Env, class QFunc>
EpisodeResult run_episode(Env& env, QFunc& q, EligibilityTrace& trace, SigmaScheme& scheme,
                          const AgentConfig& config, Rng& rng) {
    const double step_size =
        config.divide_alpha_by_tilings ? config.alpha / q.features_per_pair() : config.alpha;

    EpisodeResult result;
    trace.clear();

    auto current = detail::encode(q, env.reset());
    int action = 0;
    {
        const auto dist = policy_distribution(q.values(current), config.policy);
        action = static_cast<int>(sample_action(dist, rng));
    }

    for (long t = 0; t < config.max_steps_per_episode; ++t) {
        const double sigma = scheme.current_sigma();
        const auto tr = env.step(action);
        result.total_return += tr.reward;

        double q_next = 0.0;
        double v_next = 0.0;
        double pi_next = 0.0;
        int next_action = 0;
        decltype(current) next{};
        if (!tr.terminal) {
            next = detail::encode(q, tr.next_observation);
            const auto next_values = q.values(next);
            const auto dist = policy_distribution(next_values, config.policy);
            next_action = static_cast<int>(sample_action(dist, rng));
            q_next = next_values[static_cast<std::size_t>(next_action)];
            v_next = expected_value(dist, next_values);
            pi_next = dist[static_cast<std::size_t>(next_action)];
        }

        const double delta =
            td_error(tr.reward, config.gamma, sigma, q_next, v_next, q.value(current, action));
        if (!std::isfinite(delta)) throw DivergedError("diverged", t);
        scheme.observe_td_error(delta);

        result.td_errors.push_back(delta);
        result.sigmas.push_back(sigma);
        ++result.steps;

        q.accumulate(trace, current, action);
        if (!q.apply(trace, step_size * delta)) throw DivergedError("diverged", t);

        if (tr.terminal) {
            result.terminated = true;
            break;
        }
        trace.decay(trace_decay_factor(config.gamma, config.lambda, sigma, pi_next));

        current = std::move(next);
        action = next_action;
    }

    scheme.end_episode();
    env.on_episode_end();
    return result;
}

}  // namespace qsigma
