#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "oracles.hpp"
#include "qsigma/envs.hpp"

using namespace qsigma;

TEST(RandomWalk, StepExamples) {
    auto t = randomwalk_step(19, WalkAction::Right);
    EXPECT_TRUE(t.terminal);
    EXPECT_EQ(t.reward, 1.0);
    t = randomwalk_step(1, WalkAction::Left);
    EXPECT_TRUE(t.terminal);
    EXPECT_EQ(t.reward, -1.0);
    t = randomwalk_step(10, WalkAction::Right);
    EXPECT_FALSE(t.terminal);
    EXPECT_EQ(t.next_observation, 11);
    EXPECT_EQ(t.reward, 0.0);
    EXPECT_THROW(randomwalk_step(0, WalkAction::Right), TerminalStateError);
    EXPECT_THROW(randomwalk_step(20, WalkAction::Left), TerminalStateError);
}

TEST(RandomWalk, EnvThrowsAfterTerminal) {
    RandomWalk19 env;
    env.reset();
    for (int i = 0; i < 9; ++i) env.step(1);
    EXPECT_TRUE(env.step(1).terminal);
    EXPECT_THROW(env.step(1), TerminalStateError);
}

TEST(RandomWalk, TrueValuesExamples) {
    const auto v = randomwalk_true_values();
    ASSERT_EQ(v.size(), 19u);
    EXPECT_NEAR(v[9], 0.0, 1e-10);
    EXPECT_NEAR(v[0], -0.9, 1e-10);
    EXPECT_NEAR(v[18], 0.9, 1e-10);
}

TEST(RandomWalk, TrueValuesMatchLinearSolve) {
    const auto v = randomwalk_true_values();
    const auto x = oracle::walk_values_linear_solve();
    for (std::size_t i = 0; i < 19; ++i) EXPECT_NEAR(v[i], x[i], 1e-10);
}

TEST(RandomWalk, BellmanResidual) {
    const auto v = randomwalk_true_values();
    for (std::size_t i = 0; i < 19; ++i) {
        const double left = i == 0 ? -1.0 : v[i - 1];
        const double right = i == 18 ? 1.0 : v[i + 1];
        EXPECT_LT(std::abs(v[i] - 0.5 * left - 0.5 * right), 1e-10);
    }
}

TEST(RandomWalk, EquiprobableReturnMeanIsZero) {
    RandomWalk19 env;
    Rng rng(2);
    const int n = 10000;
    double sum = 0.0, sum2 = 0.0;
    for (int ep = 0; ep < n; ++ep) {
        env.reset();
        for (;;) {
            const auto t = env.step(static_cast<int>(rng.below(2)));
            if (t.terminal) {
                sum += t.reward;
                sum2 += t.reward * t.reward;
                break;
            }
        }
    }
    const double mean = sum / n;
    const double se = std::sqrt((sum2 / n - mean * mean) / n);
    EXPECT_LT(std::abs(mean), 3.0 * se);
}

TEST(Windy, DeterministicExamples) {
    WindyLayout layout;
    Rng rng(0);
    auto t = windy_step(layout, {3, 3}, GridAction::Right, false, rng);
    EXPECT_EQ(t.next_observation, (Cell{4, 4}));
    EXPECT_EQ(t.reward, -1.0);
    EXPECT_FALSE(t.terminal);
    t = windy_step(layout, {6, 6}, GridAction::Up, false, rng);
    EXPECT_EQ(t.next_observation, (Cell{6, 6}));
    t = windy_step(layout, {0, 0}, GridAction::Left, false, rng);
    EXPECT_EQ(t.next_observation, (Cell{0, 0}));
    t = windy_step(layout, {6, 1}, GridAction::Right, false, rng);
    EXPECT_EQ(t.next_observation, (Cell{7, 3}));
    EXPECT_TRUE(t.terminal);
    EXPECT_EQ(t.reward, -1.0);
    EXPECT_THROW(windy_step(layout, layout.goal, GridAction::Up, false, rng), TerminalStateError);
}

TEST(Windy, NonStochasticConsumesNoRandomness) {
    WindyLayout layout;
    Rng a(5), b(5);
    windy_step(layout, {2, 2}, GridAction::Up, false, a);
    EXPECT_EQ(a.uniform(), b.uniform());
}

TEST(Windy, RandomBranchLandsInNeighbourhood) {
    WindyLayout layout;
    int random_branch = 0;
    for (std::uint64_t seed = 0; seed < 5000; ++seed) {
        Rng rng(seed), twin(seed);
        const Cell from{4, 3};
        const auto t = windy_step(layout, from, GridAction::Left, true, rng);
        if (twin.uniform() < 0.1) {
            ++random_branch;
            EXPECT_LE(std::abs(t.next_observation.x - from.x), 1);
            EXPECT_LE(std::abs(t.next_observation.y - from.y), 1);
            EXPECT_FALSE(t.next_observation == from);
        } else {
            EXPECT_EQ(t.next_observation, (Cell{3, 4}));
        }
    }
    EXPECT_GT(random_branch, 0);
}

TEST(Windy, BranchFrequencyWithinThreeSigma) {
    // The random branch is taken iff the first draw of the step is < 0.1;
    // a twin stream replays the draws to classify each step.
    WindyLayout layout;
    layout.goal = {-1, -1};  // unreachable so the walk never stops
    Rng rng(2718);
    const int n = 100000;
    int hits = 0;
    Cell pos = layout.start;
    for (int i = 0; i < n; ++i) {
        Rng probe = rng;
        const bool random_branch = probe.uniform() < 0.1;
        hits += random_branch;
        pos = windy_step(layout, pos, static_cast<GridAction>(i % 4), true, rng).next_observation;
        ASSERT_TRUE(layout.contains(pos));
    }
    const double sd = std::sqrt(n * 0.1 * 0.9);
    EXPECT_NEAR(hits, 0.1 * n, 3.0 * sd);
}

TEST(Windy, PositionsStayInGrid) {
    WindyGrid env(true, 9);
    Rng rng(10);
    env.reset();
    for (int i = 0; i < 20000; ++i) {
        const auto t = env.step(static_cast<int>(rng.below(4)));
        ASSERT_TRUE(env.layout().contains(env.position()));
        ASSERT_EQ(t.next_observation, env.layout().index(env.position()));
        if (t.terminal) env.reset();
    }
}

TEST(Windy, DeterministicGivenActions) {
    auto trajectory = [](std::uint64_t seed) {
        WindyGrid env(false, seed);
        std::vector<int> obs;
        env.reset();
        for (int a : {3, 3, 3, 0, 3, 3, 1, 2, 3, 3, 3, 3}) {
            const auto t = env.step(a);
            obs.push_back(t.next_observation);
            if (t.terminal) break;
        }
        return obs;
    };
    EXPECT_EQ(trajectory(1), trajectory(999));
}

TEST(Windy, ReachableCells) {
    WindyLayout layout;
    const auto reach = layout.reachable_from_start();
    EXPECT_EQ(reach.size(), 63u);
    std::set<int> idx;
    for (auto c : reach) idx.insert(layout.index(c));
    EXPECT_TRUE(idx.count(layout.index(layout.start)));
    EXPECT_TRUE(idx.count(layout.index(layout.goal)));
    for (Cell c : {Cell{4, 0}, Cell{5, 0}, Cell{6, 0}, Cell{7, 0}, Cell{5, 1}, Cell{6, 1}, Cell{6, 2}})
        EXPECT_FALSE(idx.count(layout.index(c)));
}

TEST(MovingGoal, ChangesEveryTenEpisodes) {
    MovingGoalGrid env(42);
    const Cell initial = env.goal();
    for (int i = 1; i <= 9; ++i) {
        env.on_episode_end();
        EXPECT_EQ(env.goal(), initial);
    }
    env.on_episode_end();
    ASSERT_EQ(env.goal_changes().size(), 1u);
    EXPECT_EQ(env.goal_changes()[0].first, 10);
    EXPECT_FALSE(env.goal() == env.grid().layout().start);
    for (int i = 0; i < 90; ++i) env.on_episode_end();
    ASSERT_EQ(env.goal_changes().size(), 10u);
    for (std::size_t k = 0; k < env.goal_changes().size(); ++k) {
        EXPECT_EQ(env.goal_changes()[k].first, static_cast<int>(10 * (k + 1)));
        EXPECT_FALSE(env.goal_changes()[k].second == env.grid().layout().start);
    }
}

TEST(MovingGoal, SeededSequenceReproducible) {
    MovingGoalGrid a(7), b(7), c(8);
    for (int i = 0; i < 200; ++i) {
        a.on_episode_end();
        b.on_episode_end();
        c.on_episode_end();
    }
    std::vector<int> ga, gb, gc;
    for (auto& [n, g] : a.goal_changes()) ga.push_back(a.grid().layout().index(g));
    for (auto& [n, g] : b.goal_changes()) gb.push_back(b.grid().layout().index(g));
    for (auto& [n, g] : c.goal_changes()) gc.push_back(c.grid().layout().index(g));
    EXPECT_EQ(ga, gb);
    EXPECT_NE(ga, gc);
}

TEST(MovingGoal, GoalsAlwaysReachable) {
    MovingGoalGrid env(3);
    for (int i = 0; i < 2000; ++i) env.on_episode_end();
    const auto& cand = env.goal_candidates();
    EXPECT_EQ(cand.size(), 62u);
    for (auto& [n, g] : env.goal_changes())
        EXPECT_NE(std::find(cand.begin(), cand.end(), g), cand.end());
}

TEST(MountainCar, StepExamples) {
    auto t = mountaincar_step({-0.5, 0.0}, 1);
    const double v = -0.0025 * std::cos(-1.5);
    EXPECT_NEAR(t.next_observation.velocity, v, 1e-15);
    EXPECT_NEAR(t.next_observation.velocity, -1.768e-4, 1e-7);
    EXPECT_NEAR(t.next_observation.position, -0.500177, 1e-6);
    EXPECT_EQ(t.reward, -1.0);
    EXPECT_FALSE(t.terminal);

    t = mountaincar_step({-1.2, -0.05}, 0);
    EXPECT_EQ(t.next_observation.position, -1.2);
    EXPECT_EQ(t.next_observation.velocity, 0.0);

    t = mountaincar_step({0.49, 0.06}, 2);
    EXPECT_TRUE(t.terminal);
    EXPECT_EQ(t.next_observation.position, 0.5);
    EXPECT_THROW(mountaincar_step(t.next_observation, 1), TerminalStateError);
}

TEST(MountainCar, StateStaysInBounds) {
    MountainCar env(1);
    Rng rng(2);
    env.reset();
    for (int i = 0; i < 50000; ++i) {
        const auto t = env.step(static_cast<int>(rng.below(3)));
        const auto& s = env.state();
        ASSERT_GE(s.position, -1.2);
        ASSERT_LE(s.position, 0.5);
        ASSERT_LE(std::abs(s.velocity), 0.07);
        if (t.terminal) env.reset();
    }
}

TEST(MountainCar, ResetRange) {
    MountainCar env(5);
    for (int i = 0; i < 1000; ++i) {
        const auto o = env.reset();
        EXPECT_GE(o[0], -0.6);
        EXPECT_LT(o[0], -0.4);
        EXPECT_EQ(o[1], 0.0);
    }
}

TEST(CartPole, FailedStateIsTerminal) {
    CartPoleState s;
    s.angle = 13.0 * std::numbers::pi / 180.0;
    EXPECT_TRUE(s.terminal());
    EXPECT_THROW(cartpole_step(s, 1), TerminalStateError);
    CartPoleState p;
    p.position = 2.5;
    EXPECT_TRUE(p.terminal());
}

TEST(CartPole, PushRightFromRest) {
    CartPoleState s;
    auto t = cartpole_step(s, 1);
    EXPECT_GT(t.next_observation.velocity, 0.0);
    EXPECT_LT(t.next_observation.angular_velocity, 0.0);
    t = cartpole_step(t.next_observation, 1);
    EXPECT_LT(t.next_observation.angle, 0.0);
    EXPECT_EQ(t.reward, 1.0);
}

TEST(CartPole, ResetSeededAndBounded) {
    CartPole a(11), b(11);
    for (int i = 0; i < 200; ++i) {
        const auto oa = a.reset();
        EXPECT_EQ(oa, b.reset());
        for (double x : oa) {
            EXPECT_GE(x, -0.05);
            EXPECT_LT(x, 0.05);
        }
    }
}

TEST(CartPole, TerminatesUnderConstantPush) {
    CartPole env(0);
    env.reset();
    int steps = 0;
    for (;;) {
        ++steps;
        if (env.step(1).terminal) break;
        ASSERT_LT(steps, 1000);
    }
    EXPECT_GT(steps, 1);
}
