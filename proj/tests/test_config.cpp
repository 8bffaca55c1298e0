#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "qsigma/config.hpp"
#include "qsigma/figures.hpp"

using namespace qsigma;

TEST(Config, ParseTextAndAccessors) {
    ExperimentConfig c;
    c.parse_text(
        "# comment\n"
        "env = swg\n"
        "scheme=decay:1:0.99\n"
        "lambda=0.7\n"
        "alpha=0.5\n"
        "\n"
        "epsilon=0.2\n"
        "episodes=12\n"
        "runs=7\n"
        "seed=5\n"
        "smooth_window=3\n"
        "confidence=0.95\n");
    EXPECT_EQ(c.env(), EnvId::StochasticWindy);
    const auto spec = c.run_spec();
    EXPECT_EQ(spec.agent.scheme.to_string(), "decay:1:0.99");
    EXPECT_EQ(spec.agent.lambda, 0.7);
    EXPECT_EQ(spec.agent.alpha, 0.5);
    EXPECT_EQ(std::get<EpsilonGreedy>(spec.agent.policy).epsilon, 0.2);
    EXPECT_EQ(spec.num_episodes, 12);
    EXPECT_EQ(spec.base_seed, 5u);
    EXPECT_EQ(c.runs(), 7);
    EXPECT_EQ(c.smooth_window(), 3);
    EXPECT_EQ(c.confidence(), 0.95);
    EXPECT_EQ(c.metric(), Metric::Return);
    EXPECT_EQ(c.objective(), Objective::MeanReturn);
}

TEST(Config, LaterSetOverrides) {
    ExperimentConfig c;
    c.parse_text("alpha=0.3\nlambda=0.2\n");
    c.set("alpha", "0.9");
    EXPECT_EQ(c.run_spec().agent.alpha, 0.9);
    EXPECT_EQ(c.run_spec().agent.lambda, 0.2);
}

TEST(Config, Defaults) {
    ExperimentConfig c;
    EXPECT_EQ(c.env(), EnvId::RandomWalk19);
    EXPECT_EQ(c.metric(), Metric::Rms);
    EXPECT_EQ(c.objective(), Objective::AucRms);
    EXPECT_EQ(c.runs(), 100);
    EXPECT_EQ(c.confidence(), 0.99);
    EXPECT_TRUE(std::holds_alternative<Equiprobable>(c.run_spec().agent.policy));
}

TEST(Config, Errors) {
    ExperimentConfig c;
    EXPECT_THROW(c.set("colour", "red"), std::invalid_argument);
    EXPECT_THROW(c.parse_text("alpha 0.5\n"), std::invalid_argument);
    c.set("alpha", "abc");
    EXPECT_THROW(c.run_spec(), std::invalid_argument);
    ExperimentConfig d;
    d.set("lambda", "0.1,0.2");
    EXPECT_THROW(d.run_spec(), std::invalid_argument);
    ExperimentConfig e;
    e.set("runs", "0");
    EXPECT_THROW(e.runs(), std::invalid_argument);
    ExperimentConfig f;
    EXPECT_THROW(f.load_file("/nonexistent/qsigma.cfg"), std::ios_base::failure);
}

TEST(Config, SweepLists) {
    ExperimentConfig c;
    c.parse_text("env=swg\nscheme=decay:1:0.99, tderror:max\nlambda=0.1,0.5,0.9\nalpha=0.5\nruns=3\n");
    const auto s = c.sweep_spec();
    EXPECT_EQ(s.schemes.size(), 2u);
    EXPECT_EQ(s.lambdas, (std::vector<double>{0.1, 0.5, 0.9}));
    EXPECT_EQ(s.alphas, (std::vector<double>{0.5}));
    EXPECT_EQ(s.num_runs, 3);
}

TEST(Config, LoadFile) {
    const auto path = std::filesystem::temp_directory_path() / "qsigma_config_test.cfg";
    {
        std::ofstream out(path);
        out << "env=cartpole\nmax_steps=500\ndivide-alpha=false\n";
    }
    ExperimentConfig c;
    c.load_file(path.string());
    const auto spec = c.run_spec();
    EXPECT_EQ(spec.env, EnvId::CartPole);
    EXPECT_EQ(spec.agent.max_steps_per_episode, 500);
    EXPECT_FALSE(spec.agent.divide_alpha_by_tilings);
    std::filesystem::remove(path);
}

TEST(Figures, PresetsCoverRequiredIds) {
    for (const char* id : {"2", "3", "4", "5", "6", "7", "8", "10", "11"}) EXPECT_NO_THROW(find_figure(id));
    EXPECT_THROW(find_figure("99"), std::invalid_argument);
    EXPECT_TRUE(find_figure("4").sweep.has_value());
    EXPECT_TRUE(find_figure("2").series.size() == 2);
}

TEST(Figures, SmallCurveRun) {
    FigureOptions o;
    o.runs = 3;
    o.episodes = 4;
    const auto files = run_figure("2", o);
    ASSERT_EQ(files.size(), 2u);
    EXPECT_EQ(files[0].name, "fig2_decay.csv");
    EXPECT_EQ(files[1].name, "fig2_tderror.csv");
    EXPECT_EQ(files[0].csv.rfind("episode,mean,stderr,ci_halfwidth\n", 0), 0u);
    EXPECT_EQ(std::count(files[0].csv.begin(), files[0].csv.end(), '\n'), 5);
}

TEST(Figures, SigmaTrajectoryDump) {
    FigureOptions o;
    o.episodes = 5;
    const auto files = run_figure("11", o);
    ASSERT_EQ(files.size(), 2u);
    std::istringstream is(files[0].csv);
    const auto c = read_curve_csv(is);
    ASSERT_EQ(c.size(), 5u);
    for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(c.mean[i], std::pow(0.95, static_cast<double>(i)));
}

TEST(Figures, SmallSweepRun) {
    FigureOptions o;
    o.runs = 2;
    o.episodes = 2;
    const auto files = run_figure("4", o);
    ASSERT_EQ(files.size(), 1u);
    EXPECT_EQ(files[0].name, "fig4_sweep.csv");
    EXPECT_EQ(std::count(files[0].csv.begin(), files[0].csv.end(), '\n'), 1 + 5 * 9);
}
