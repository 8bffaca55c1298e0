#include "qsigma/agent.hpp"

#include <stdexcept>
#include <utility>

namespace qsigma {

void AgentConfig::validate() const {
    if (!(alpha >= 0.0 && std::isfinite(alpha))) throw std::invalid_argument("alpha must be >= 0");
    if (!(gamma >= 0.0 && gamma <= 1.0)) throw std::invalid_argument("gamma must lie in [0,1]");
    if (!(lambda >= 0.0 && lambda <= 1.0)) throw std::invalid_argument("lambda must lie in [0,1]");
    if (max_steps_per_episode <= 0) throw std::invalid_argument("max_steps_per_episode must be > 0");
    if (const auto* eg = std::get_if<EpsilonGreedy>(&policy); eg && !(eg->epsilon >= 0.0 && eg->epsilon <= 1.0))
        throw std::invalid_argument("epsilon must lie in [0,1]");
}

double td_error(double reward, double gamma, double sigma, double q_next_sampled,
                double v_next_expected, double q_current) {
    return reward + gamma * (sigma * q_next_sampled + (1.0 - sigma) * v_next_expected) - q_current;
}

double trace_decay_factor(double gamma, double lambda, double sigma, double pi_next) {
    return gamma * lambda * (sigma + (1.0 - sigma) * pi_next);
}

// --- EligibilityTrace ------------------------------------------------------

EligibilityTrace::EligibilityTrace(std::size_t size) : values_(size, 0.0), is_active_(size, 0) {}

void EligibilityTrace::clear() {
    for (auto i : active_) {
        values_[i] = 0.0;
        is_active_[i] = 0;
    }
    active_.clear();
}

void EligibilityTrace::accumulate(std::size_t index, double amount) {
    if (index >= values_.size()) throw std::out_of_range("trace index out of range");
    values_[index] += amount;
    if (!is_active_[index]) {
        is_active_[index] = 1;
        active_.push_back(index);
    }
}

void EligibilityTrace::decay(double factor) {
    std::size_t kept = 0;
    for (std::size_t k = 0; k < active_.size(); ++k) {
        const auto i = active_[k];
        values_[i] *= factor;
        if (values_[i] == 0.0) {
            is_active_[i] = 0;
        } else {
            active_[kept++] = i;
        }
    }
    active_.resize(kept);
}

// --- TabularQ --------------------------------------------------------------

TabularQ::TabularQ(int num_states, int num_actions)
    : num_states_(num_states), num_actions_(num_actions) {
    if (num_states <= 0 || num_actions <= 0) throw std::invalid_argument("tabular Q needs states and actions");
    table_.assign(static_cast<std::size_t>(num_states) * static_cast<std::size_t>(num_actions), 0.0);
}

TabularQ::Encoded TabularQ::encode(int observation) const {
    if (observation < 0 || observation >= num_states_) throw std::out_of_range("state index out of range");
    return observation;
}

std::span<const double> TabularQ::values(Encoded s) const {
    return std::span<const double>(table_).subspan(index(s, 0), static_cast<std::size_t>(num_actions_));
}

bool TabularQ::apply(const EligibilityTrace& trace, double step) {
    bool finite = true;
    for (auto i : trace.active()) {
        table_[i] += step * trace[i];
        finite = finite && std::isfinite(table_[i]);
    }
    return finite;
}

// --- LinearQ ---------------------------------------------------------------

LinearQ::LinearQ(TileCoderConfig config, int num_actions)
    : config_(std::move(config)), num_actions_(num_actions), iht_(config_.capacity) {
    config_.validate();
    if (num_actions <= 0) throw std::invalid_argument("linear Q needs actions");
    weights_.assign(config_.capacity, 0.0);
}

LinearQ::Encoded LinearQ::encode(std::span<const double> observation) {
    const auto scaled = config_.scaled(observation);
    // Coordinates without the action input, then one key per action with
    // the action appended: identical to tiles(iht, n, scaled, {a}).
    const auto base = tile_coordinates(config_.num_tilings, scaled, {});
    Encoded e;
    const auto n = static_cast<std::size_t>(config_.num_tilings);
    e.features.resize(n * static_cast<std::size_t>(num_actions_));
    e.values.assign(static_cast<std::size_t>(num_actions_), 0.0);
    for (int a = 0; a < num_actions_; ++a) {
        for (std::size_t k = 0; k < n; ++k) {
            TileKey key = base[k];
            key.v[key.len++] = a;
            e.features[static_cast<std::size_t>(a) * n + k] = iht_.index(key);
        }
    }
    for (int a = 0; a < num_actions_; ++a) e.values[static_cast<std::size_t>(a)] = value(e, a);
    return e;
}

std::span<const std::size_t> LinearQ::features(const Encoded& e, int a) const {
    const auto n = static_cast<std::size_t>(config_.num_tilings);
    return std::span<const std::size_t>(e.features).subspan(static_cast<std::size_t>(a) * n, n);
}

double LinearQ::value(const Encoded& e, int a) const {
    double v = 0.0;
    for (auto i : features(e, a)) v += weights_[i];
    return v;
}

void LinearQ::accumulate(EligibilityTrace& trace, const Encoded& e, int a) const {
    for (auto i : features(e, a)) trace.accumulate(i);
}

bool LinearQ::apply(const EligibilityTrace& trace, double step) {
    bool finite = true;
    for (auto i : trace.active()) {
        weights_[i] += step * trace[i];
        finite = finite && std::isfinite(weights_[i]);
    }
    return finite;
}

std::vector<double> state_values_from_q(const TabularQ& q, const PolicyKind& policy) {
    std::vector<double> v(static_cast<std::size_t>(q.num_states()));
    for (int s = 0; s < q.num_states(); ++s) {
        const auto row = q.values(s);
        v[static_cast<std::size_t>(s)] = expected_value(policy_distribution(row, policy), row);
    }
    return v;
}

}  // namespace qsigma
