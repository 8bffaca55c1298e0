#pragma once

#include <array>
#include <cstdint>
#include <numbers>
#include <utility>
#include <vector>

#include "qsigma/core.hpp"

namespace qsigma {

// ---------------------------------------------------------------------------
// 19-state random walk with deterministic left/right moves.
// Positions 0 and 20 are terminal; interior states are 1..19.
// ---------------------------------------------------------------------------

enum class WalkAction : int { Left = 0, Right = 1 };

Transition<int> randomwalk_step(int position, WalkAction action);

/// Value of each interior state (1..19, in order) under the equiprobable
/// policy, from iterative Bellman evaluation run to a 1e-15 sweep change.
std::vector<double> randomwalk_true_values();

class RandomWalk19 {
public:
    using Observation = int;
    static constexpr int kLeftTerminal = 0;
    static constexpr int kRightTerminal = 20;
    static constexpr int kStart = 10;
    static constexpr int kNumInterior = 19;

    int num_actions() const noexcept { return 2; }
    int num_states() const noexcept { return 21; }
    Observation reset() { return position_ = kStart; }
    Transition<int> step(int action);
    void on_episode_end() {}

    int position() const noexcept { return position_; }

private:
    int position_ = kStart;
};

// ---------------------------------------------------------------------------
// Windy gridworld family. y grows upward; wind pushes +y by the strength of
// the column the agent is leaving.
// ---------------------------------------------------------------------------

struct Cell {
    int x = 0;
    int y = 0;
    bool operator==(const Cell&) const = default;
};

enum class GridAction : int { Up = 0, Down = 1, Left = 2, Right = 3 };

struct WindyLayout {
    int width = 10;
    int height = 7;
    std::array<int, 10> wind{0, 0, 0, 1, 1, 1, 2, 2, 1, 0};
    Cell start{0, 3};
    Cell goal{7, 3};

    Cell clip(Cell c) const noexcept;
    bool contains(Cell c) const noexcept { return c.x >= 0 && c.x < width && c.y >= 0 && c.y < height; }
    int index(Cell c) const noexcept { return c.y * width + c.x; }
    Cell cell(int index) const noexcept { return {index % width, index / width}; }
    int num_cells() const noexcept { return width * height; }

    /// Cells enterable from start under the wind-and-action rule, in index
    /// order, start included.
    std::vector<Cell> reachable_from_start() const;
};

/// One windy transition. With stochastic set, one uniform decides the
/// branch; on the 10% branch a second draw picks one of the eight
/// neighbours of `from` (clipped into the grid), replacing the move.
Transition<Cell> windy_step(const WindyLayout& layout, Cell from, GridAction action, bool stochastic,
                            Rng& rng);

class WindyGrid {
public:
    using Observation = int;
    static constexpr double kRandomNeighbourProbability = 0.1;

    WindyGrid(bool stochastic, std::uint64_t seed);

    int num_actions() const noexcept { return 4; }
    int num_states() const noexcept { return layout_.num_cells(); }
    Observation reset();
    Transition<int> step(int action);
    void on_episode_end() {}

    const WindyLayout& layout() const noexcept { return layout_; }
    Cell position() const noexcept { return position_; }
    void set_position(Cell c);
    void set_goal(Cell c);
    bool stochastic() const noexcept { return stochastic_; }
    Rng& rng() noexcept { return rng_; }

private:
    WindyLayout layout_;
    bool stochastic_;
    Rng rng_;
    Cell position_;
};

/// Deterministic windy gridworld whose goal is re-drawn every 10 episodes.
class MovingGoalGrid {
public:
    using Observation = int;
    static constexpr int kEpisodesPerGoal = 10;

    explicit MovingGoalGrid(std::uint64_t seed);

    int num_actions() const noexcept { return grid_.num_actions(); }
    int num_states() const noexcept { return grid_.num_states(); }
    Observation reset() { return grid_.reset(); }
    Transition<int> step(int action) { return grid_.step(action); }

    /// Advances the episode counter; on multiples of 10 the goal is
    /// re-drawn uniformly from the cells reachable from start, start
    /// excluded. Some cells under strong wind can never be entered.
    void on_episode_end();

    const std::vector<Cell>& goal_candidates() const noexcept { return candidates_; }

    Cell goal() const noexcept { return grid_.layout().goal; }
    int episode_counter() const noexcept { return episode_counter_; }
    /// (episode counter at the change, new goal) for every re-draw.
    const std::vector<std::pair<int, Cell>>& goal_changes() const noexcept { return changes_; }
    const WindyGrid& grid() const noexcept { return grid_; }

private:
    WindyGrid grid_;
    std::vector<Cell> candidates_;
    int episode_counter_ = 0;
    std::vector<std::pair<int, Cell>> changes_;
};

// ---------------------------------------------------------------------------
// Mountain car. Actions 0,1,2 are throttle -1, 0, +1.
// ---------------------------------------------------------------------------

struct MountainCarState {
    static constexpr double kMinPosition = -1.2;
    static constexpr double kMaxPosition = 0.5;
    static constexpr double kMaxSpeed = 0.07;
    double position = -0.5;
    double velocity = 0.0;
    bool terminal() const noexcept { return position >= kMaxPosition; }
};

Transition<MountainCarState> mountaincar_step(const MountainCarState& state, int action);

class MountainCar {
public:
    using Observation = std::array<double, 2>;

    explicit MountainCar(std::uint64_t seed) : rng_(seed) {}

    int num_actions() const noexcept { return 3; }
    /// Position uniform in [-0.6, -0.4), velocity 0.
    Observation reset();
    Transition<Observation> step(int action);
    void on_episode_end() {}

    const MountainCarState& state() const noexcept { return state_; }
    void set_state(const MountainCarState& s) { state_ = s; }

private:
    Rng rng_;
    MountainCarState state_;
};

// ---------------------------------------------------------------------------
// Cart-pole balancing, Euler integration. Actions 0 push left, 1 push right.
// ---------------------------------------------------------------------------

struct CartPoleState {
    static constexpr double kGravity = 9.8;
    static constexpr double kCartMass = 1.0;
    static constexpr double kPoleMass = 0.1;
    static constexpr double kHalfLength = 0.5;
    static constexpr double kForce = 10.0;
    static constexpr double kTau = 0.02;
    static constexpr double kMaxPosition = 2.4;
    static constexpr double kMaxAngle = 12.0 * std::numbers::pi / 180.0;

    double position = 0.0;
    double velocity = 0.0;
    double angle = 0.0;
    double angular_velocity = 0.0;

    bool terminal() const noexcept {
        return position < -kMaxPosition || position > kMaxPosition || angle < -kMaxAngle ||
               angle > kMaxAngle;
    }
};

/// Reward +1 on every step, including the failing one.
Transition<CartPoleState> cartpole_step(const CartPoleState& state, int action);

class CartPole {
public:
    using Observation = std::array<double, 4>;

    explicit CartPole(std::uint64_t seed) : rng_(seed) {}

    int num_actions() const noexcept { return 2; }
    /// Each component uniform in [-0.05, 0.05), drawn in field order.
    Observation reset();
    Transition<Observation> step(int action);
    void on_episode_end() {}

    const CartPoleState& state() const noexcept { return state_; }
    void set_state(const CartPoleState& s) { state_ = s; }

private:
    Rng rng_;
    CartPoleState state_;
};

}  // namespace qsigma
