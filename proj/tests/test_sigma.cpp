#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "qsigma/core.hpp"
#include "qsigma/sigma.hpp"

using namespace qsigma;

namespace {

// Runs one episode with a single TD error so the reference becomes |delta|.
void prime(SigmaScheme& s, double delta) {
    s.observe_td_error(delta);
    s.end_episode();
}

}  // namespace

TEST(SigmaCurrent, InitialValues) {
    EXPECT_EQ(SigmaScheme::td_error_max().current_sigma(), 1.0);
    EXPECT_EQ(SigmaScheme::td_error_mean().current_sigma(), 1.0);
    EXPECT_EQ(SigmaScheme::combined(0.95).current_sigma(), 1.0);
    EXPECT_EQ(SigmaScheme::constant(0.3).current_sigma(), 0.3);
    EXPECT_EQ(SigmaScheme::dynamic_decay(1.0, 0.95).current_sigma(), 1.0);
}

TEST(SigmaObserve, RatioAgainstReference) {
    auto s = SigmaScheme::td_error_max();
    prime(s, 1.0);
    EXPECT_EQ(s.episode_count(), 1);
    EXPECT_EQ(s.reference_td(), 1.0);
    EXPECT_EQ(s.observe_td_error(0.5), 0.5);
    EXPECT_EQ(s.current_sigma(), 0.5);
    EXPECT_EQ(s.observe_td_error(-2.0), 1.0);
}

TEST(SigmaObserve, FirstEpisodeStaysAtOne) {
    auto s = SigmaScheme::td_error_max();
    for (double d : {0.0, 1e-9, -3.0, 100.0}) EXPECT_EQ(s.observe_td_error(d), 1.0);
}

TEST(SigmaObserve, NonFiniteThrows) {
    auto s = SigmaScheme::td_error_max();
    EXPECT_THROW(s.observe_td_error(std::numeric_limits<double>::infinity()), DivergedError);
    EXPECT_THROW(s.observe_td_error(std::nan("")), DivergedError);
}

TEST(SigmaObserve, ConstantAndDecayRecordButIgnore) {
    auto c = SigmaScheme::constant(0.4);
    c.observe_td_error(3.0);
    c.observe_td_error(-1.0);
    EXPECT_EQ(c.current_sigma(), 0.4);
    ASSERT_EQ(c.episode_td_magnitudes().size(), 2u);
    EXPECT_EQ(c.episode_td_magnitudes()[1], 1.0);
}

TEST(SigmaObserve, ZeroReferenceGivesZero) {
    auto s = SigmaScheme::td_error_max();
    prime(s, 0.0);
    EXPECT_EQ(s.observe_td_error(0.7), 0.0);
}

TEST(SigmaEndEpisode, DecayAfterTwoEpisodes) {
    auto s = SigmaScheme::dynamic_decay(1.0, 0.95);
    s.end_episode();
    s.end_episode();
    EXPECT_NEAR(s.current_sigma(), 0.9025, 1e-15);
}

TEST(SigmaEndEpisode, FactorOneIsIdentity) {
    auto s = SigmaScheme::dynamic_decay(1.0, 1.0);
    for (int i = 0; i < 37; ++i) s.end_episode();
    EXPECT_EQ(s.current_sigma(), 1.0);
}

TEST(SigmaEndEpisode, DecayIsExactPower) {
    auto s = SigmaScheme::dynamic_decay(0.8, 0.9);
    for (int n = 1; n <= 200; ++n) {
        s.end_episode();
        EXPECT_EQ(s.current_sigma(), 0.8 * std::pow(0.9, n));
    }
}

TEST(SigmaEndEpisode, MaxReference) {
    auto s = SigmaScheme::td_error_max();
    for (double d : {0.1, -0.7, 0.3}) s.observe_td_error(d);
    s.end_episode();
    EXPECT_EQ(s.reference_td(), 0.7);
    EXPECT_TRUE(s.episode_td_magnitudes().empty());
}

TEST(SigmaEndEpisode, MeanReference) {
    auto s = SigmaScheme::td_error_mean();
    for (double d : {0.1, -0.7, 0.4}) s.observe_td_error(d);
    s.end_episode();
    EXPECT_NEAR(s.reference_td(), 0.4, 1e-15);
    EXPECT_NEAR(s.observe_td_error(0.2), 0.5, 1e-15);
}

TEST(SigmaEndEpisode, EmptyEpisodeThrowsForTdVariants) {
    auto s = SigmaScheme::td_error_max();
    EXPECT_THROW(s.end_episode(), std::logic_error);
    auto c = SigmaScheme::combined(0.9);
    EXPECT_THROW(c.end_episode(), std::logic_error);
    auto k = SigmaScheme::constant(1.0);
    EXPECT_NO_THROW(k.end_episode());
}

TEST(SigmaCombined, DecaysBeforeClamp) {
    auto s = SigmaScheme::combined(0.5);
    prime(s, 1.0);  // episode_count 1 -> factor 0.5
    EXPECT_EQ(s.observe_td_error(0.5), 0.25);
    // |delta| / ref = 3 -> 1.5 after decay -> clamped to 1
    EXPECT_EQ(s.observe_td_error(3.0), 1.0);
    s.end_episode();  // reference 3, episode_count 2 -> factor 0.25
    EXPECT_EQ(s.observe_td_error(6.0), 0.5);
}

TEST(SigmaParse, AllForms) {
    EXPECT_EQ(SigmaScheme::parse("constant:0.5").kind(), SigmaScheme::Kind::Constant);
    EXPECT_EQ(SigmaScheme::parse("constant:0.5").current_sigma(), 0.5);
    EXPECT_EQ(SigmaScheme::parse("decay:1.0:0.95").kind(), SigmaScheme::Kind::DynamicDecay);
    EXPECT_EQ(SigmaScheme::parse("tderror:max").kind(), SigmaScheme::Kind::TdErrorMax);
    EXPECT_EQ(SigmaScheme::parse("tderror:mean").kind(), SigmaScheme::Kind::TdErrorMean);
    EXPECT_EQ(SigmaScheme::parse("combined:0.95").kind(), SigmaScheme::Kind::Combined);
    for (const char* text : {"constant:0.5", "decay:1:0.95", "tderror:max", "tderror:mean", "combined:0.95"})
        EXPECT_EQ(SigmaScheme::parse(text).to_string(), text);
    EXPECT_THROW(SigmaScheme::parse("constant:1.5"), std::invalid_argument);
    EXPECT_THROW(SigmaScheme::parse("decay:1:0"), std::invalid_argument);
    EXPECT_THROW(SigmaScheme::parse("tderror:median"), std::invalid_argument);
    EXPECT_THROW(SigmaScheme::parse("constant:abc"), std::invalid_argument);
    EXPECT_THROW(SigmaScheme::parse(""), std::invalid_argument);
}

TEST(SigmaReset, RestoresFreshState) {
    auto s = SigmaScheme::td_error_max();
    prime(s, 2.0);
    s.observe_td_error(1.0);
    s.reset();
    EXPECT_EQ(s.current_sigma(), 1.0);
    EXPECT_EQ(s.episode_count(), 0);
    EXPECT_EQ(s.reference_td(), 0.0);
    EXPECT_TRUE(s.episode_td_magnitudes().empty());
}

TEST(SigmaProperty, StaysInUnitIntervalForRandomStreams) {
    Rng rng(777);
    for (int config = 0; config < 1000; ++config) {
        SigmaScheme s = SigmaScheme::constant(rng.uniform());
        switch (config % 5) {
            case 1: s = SigmaScheme::dynamic_decay(rng.uniform(), 0.01 + 0.99 * rng.uniform()); break;
            case 2: s = SigmaScheme::td_error_max(); break;
            case 3: s = SigmaScheme::td_error_mean(); break;
            case 4: s = SigmaScheme::combined(0.01 + 0.99 * rng.uniform()); break;
            default: break;
        }
        const int episodes = 1 + static_cast<int>(rng.below(8));
        for (int e = 0; e < episodes; ++e) {
            const int steps = 1 + static_cast<int>(rng.below(30));
            for (int t = 0; t < steps; ++t) {
                // Mix of magnitudes, exact zeros and sign flips.
                double d = rng.uniform(-1.0, 1.0) * std::pow(10.0, rng.uniform(-6.0, 4.0));
                if (rng.below(10) == 0) d = 0.0;
                const double sigma = s.observe_td_error(d);
                ASSERT_GE(sigma, 0.0);
                ASSERT_LE(sigma, 1.0);
                ASSERT_GE(s.reference_td(), 0.0);
            }
            s.end_episode();
            ASSERT_GE(s.current_sigma(), 0.0);
            ASSERT_LE(s.current_sigma(), 1.0);
        }
    }
}

TEST(SigmaProperty, SaturatesWhenDeltaExceedsReference) {
    Rng rng(8);
    for (int i = 0; i < 200; ++i) {
        auto s = SigmaScheme::td_error_max();
        const double ref = rng.uniform(0.01, 5.0);
        prime(s, ref);
        EXPECT_EQ(s.observe_td_error(ref * (1.0 + rng.uniform())), 1.0);
        EXPECT_EQ(s.observe_td_error(-ref), 1.0);
    }
}

TEST(SigmaProperty, CombinedNeverExceedsTdError) {
    Rng rng(9);
    for (int trial = 0; trial < 200; ++trial) {
        auto td = SigmaScheme::td_error_max();
        auto comb = SigmaScheme::combined(0.5 + 0.49 * rng.uniform());
        for (int e = 0; e < 6; ++e) {
            for (int t = 0; t < 20; ++t) {
                const double d = rng.uniform(-3.0, 3.0);
                const double a = td.observe_td_error(d);
                const double b = comb.observe_td_error(d);
                if (td.episode_count() >= 1) {
                    EXPECT_LE(b, a);
                }
            }
            td.end_episode();
            comb.end_episode();
        }
    }
}
