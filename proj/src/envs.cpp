#include "qsigma/envs.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qsigma {

// --- random walk -----------------------------------------------------------

Transition<int> randomwalk_step(int position, WalkAction action) {
    if (position <= RandomWalk19::kLeftTerminal || position >= RandomWalk19::kRightTerminal)
        throw TerminalStateError("random walk stepped from a terminal state");
    const int next = position + (action == WalkAction::Right ? 1 : -1);
    if (next == RandomWalk19::kRightTerminal) return {next, 1.0, true};
    if (next == RandomWalk19::kLeftTerminal) return {next, -1.0, true};
    return {next, 0.0, false};
}

std::vector<double> randomwalk_true_values() {
    // v over positions 0..20; terminal entries hold 0 and the +-1 rewards
    // enter on the transitions into them.
    // Gauss-Seidel sweeps until the largest change is below 1e-15.
    std::vector<double> v(21, 0.0);
    for (int sweep = 0; sweep < 1000000; ++sweep) {
        double change = 0.0;
        for (int s = 1; s <= 19; ++s) {
            double updated = 0.0;
            for (auto a : {WalkAction::Left, WalkAction::Right}) {
                const auto t = randomwalk_step(s, a);
                updated += 0.5 * (t.reward + (t.terminal ? 0.0 : v[static_cast<std::size_t>(t.next_observation)]));
            }
            change = std::max(change, std::abs(updated - v[static_cast<std::size_t>(s)]));
            v[static_cast<std::size_t>(s)] = updated;
        }
        if (change < 1e-15) break;
    }
    return {v.begin() + 1, v.begin() + 20};
}

Transition<int> RandomWalk19::step(int action) {
    if (action != 0 && action != 1) throw std::invalid_argument("random walk action out of range");
    auto t = randomwalk_step(position_, static_cast<WalkAction>(action));
    position_ = t.next_observation;
    return t;
}

// --- windy gridworld -------------------------------------------------------

Cell WindyLayout::clip(Cell c) const noexcept {
    return {std::clamp(c.x, 0, width - 1), std::clamp(c.y, 0, height - 1)};
}

std::vector<Cell> WindyLayout::reachable_from_start() const {
    std::vector<char> seen(static_cast<std::size_t>(num_cells()), 0);
    std::vector<Cell> frontier{start};
    seen[static_cast<std::size_t>(index(start))] = 1;
    while (!frontier.empty()) {
        const Cell c = frontier.back();
        frontier.pop_back();
        for (Cell d : {Cell{0, 1}, Cell{0, -1}, Cell{-1, 0}, Cell{1, 0}}) {
            const Cell n = clip({c.x + d.x, c.y + d.y + wind[static_cast<std::size_t>(c.x)]});
            auto& flag = seen[static_cast<std::size_t>(index(n))];
            if (!flag) {
                flag = 1;
                frontier.push_back(n);
            }
        }
    }
    std::vector<Cell> out;
    for (int i = 0; i < num_cells(); ++i)
        if (seen[static_cast<std::size_t>(i)]) out.push_back(cell(i));
    return out;
}

Transition<Cell> windy_step(const WindyLayout& layout, Cell from, GridAction action, bool stochastic,
                            Rng& rng) {
    if (from == layout.goal) throw TerminalStateError("windy grid stepped from the goal");
    if (!layout.contains(from)) throw std::invalid_argument("windy grid position off-grid");

    static constexpr std::array<Cell, 8> kNeighbours{
        Cell{-1, -1}, Cell{0, -1}, Cell{1, -1}, Cell{-1, 0},
        Cell{1, 0},   Cell{-1, 1}, Cell{0, 1},  Cell{1, 1}};

    Cell next;
    if (stochastic && rng.uniform() < WindyGrid::kRandomNeighbourProbability) {
        const Cell d = kNeighbours[rng.below(kNeighbours.size())];
        next = layout.clip({from.x + d.x, from.y + d.y});
    } else {
        Cell d{};
        switch (action) {
            case GridAction::Up: d = {0, 1}; break;
            case GridAction::Down: d = {0, -1}; break;
            case GridAction::Left: d = {-1, 0}; break;
            case GridAction::Right: d = {1, 0}; break;
        }
        const int wind = layout.wind[static_cast<std::size_t>(from.x)];
        next = layout.clip({from.x + d.x, from.y + d.y + wind});
    }
    return {next, -1.0, next == layout.goal};
}

WindyGrid::WindyGrid(bool stochastic, std::uint64_t seed)
    : stochastic_(stochastic), rng_(seed), position_(layout_.start) {}

WindyGrid::Observation WindyGrid::reset() {
    position_ = layout_.start;
    return layout_.index(position_);
}

Transition<int> WindyGrid::step(int action) {
    if (action < 0 || action > 3) throw std::invalid_argument("grid action out of range");
    const auto t = windy_step(layout_, position_, static_cast<GridAction>(action), stochastic_, rng_);
    position_ = t.next_observation;
    return {layout_.index(position_), t.reward, t.terminal};
}

void WindyGrid::set_position(Cell c) {
    if (!layout_.contains(c)) throw std::invalid_argument("position off-grid");
    position_ = c;
}

void WindyGrid::set_goal(Cell c) {
    if (!layout_.contains(c)) throw std::invalid_argument("goal off-grid");
    if (c == layout_.start) throw std::invalid_argument("goal may not equal start");
    layout_.goal = c;
}

MovingGoalGrid::MovingGoalGrid(std::uint64_t seed) : grid_(false, seed) {
    for (const Cell c : grid_.layout().reachable_from_start())
        if (!(c == grid_.layout().start)) candidates_.push_back(c);
}

void MovingGoalGrid::on_episode_end() {
    ++episode_counter_;
    if (episode_counter_ % kEpisodesPerGoal != 0) return;
    const Cell goal = candidates_[grid_.rng().below(candidates_.size())];
    grid_.set_goal(goal);
    changes_.emplace_back(episode_counter_, goal);
}

// --- mountain car ----------------------------------------------------------

Transition<MountainCarState> mountaincar_step(const MountainCarState& state, int action) {
    if (state.terminal()) throw TerminalStateError("mountain car stepped from the goal");
    if (action < 0 || action > 2) throw std::invalid_argument("mountain car action out of range");
    using S = MountainCarState;
    MountainCarState next = state;
    next.velocity += 0.001 * static_cast<double>(action - 1) - 0.0025 * std::cos(3.0 * state.position);
    next.velocity = std::clamp(next.velocity, -S::kMaxSpeed, S::kMaxSpeed);
    next.position = std::clamp(next.position + next.velocity, S::kMinPosition, S::kMaxPosition);
    if (next.position <= S::kMinPosition && next.velocity < 0.0) next.velocity = 0.0;
    return {next, -1.0, next.terminal()};
}

MountainCar::Observation MountainCar::reset() {
    state_ = {rng_.uniform(-0.6, -0.4), 0.0};
    return {state_.position, state_.velocity};
}

Transition<MountainCar::Observation> MountainCar::step(int action) {
    const auto t = mountaincar_step(state_, action);
    state_ = t.next_observation;
    return {{state_.position, state_.velocity}, t.reward, t.terminal};
}

// --- cart pole -------------------------------------------------------------

Transition<CartPoleState> cartpole_step(const CartPoleState& s, int action) {
    if (s.terminal()) throw TerminalStateError("cart pole stepped from a failed state");
    if (action != 0 && action != 1) throw std::invalid_argument("cart pole action out of range");
    using C = CartPoleState;
    constexpr double total_mass = C::kCartMass + C::kPoleMass;
    constexpr double pole_moment = C::kPoleMass * C::kHalfLength;

    const double force = action == 1 ? C::kForce : -C::kForce;
    const double cos_t = std::cos(s.angle);
    const double sin_t = std::sin(s.angle);
    const double temp = (force + pole_moment * s.angular_velocity * s.angular_velocity * sin_t) / total_mass;
    const double angular_acc =
        (C::kGravity * sin_t - cos_t * temp) /
        (C::kHalfLength * (4.0 / 3.0 - C::kPoleMass * cos_t * cos_t / total_mass));
    const double acc = temp - pole_moment * angular_acc * cos_t / total_mass;

    CartPoleState next;
    next.position = s.position + C::kTau * s.velocity;
    next.velocity = s.velocity + C::kTau * acc;
    next.angle = s.angle + C::kTau * s.angular_velocity;
    next.angular_velocity = s.angular_velocity + C::kTau * angular_acc;
    return {next, 1.0, next.terminal()};
}

CartPole::Observation CartPole::reset() {
    state_.position = rng_.uniform(-0.05, 0.05);
    state_.velocity = rng_.uniform(-0.05, 0.05);
    state_.angle = rng_.uniform(-0.05, 0.05);
    state_.angular_velocity = rng_.uniform(-0.05, 0.05);
    return {state_.position, state_.velocity, state_.angle, state_.angular_velocity};
}

Transition<CartPole::Observation> CartPole::step(int action) {
    const auto t = cartpole_step(state_, action);
    state_ = t.next_observation;
    return {{state_.position, state_.velocity, state_.angle, state_.angular_velocity}, t.reward, t.terminal};
}

}  // namespace qsigma
