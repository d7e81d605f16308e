#include <gtest/gtest.h>

#include <cmath>

#include "satbandit/hard_instances.hpp"

using namespace satbandit;

TEST(ChooseN, Examples) {
    EXPECT_EQ(lemma1_choose_n(4), 2u);
    EXPECT_EQ(lemma1_choose_n(100), 10u);
    EXPECT_EQ(lemma1_choose_n(11992), 110u);
    EXPECT_THROW(lemma1_choose_n(3.9), std::domain_error);
}

TEST(ChooseN, PropertyOnIntegersUpTo1e5) {
    for (std::size_t y = 4; y <= 100000; ++y) {
        const double x = double(lemma1_choose_n(double(y)));
        ASSERT_GE(x, 2.0);
        ASSERT_LE(x * std::log(x), double(y)) << y;
        ASSERT_GE(std::log(x), 0.5 * std::log(double(y))) << y;
    }
}

TEST(SwapWindowParams, ReferencePoint) {
    const auto p = swap_window_params(3000, 3, 0.5, 0.5);
    EXPECT_EQ(p.block_length, 3000u);
    EXPECT_EQ(p.num_candidates, 110u);
    EXPECT_EQ(p.window_length, 2u);
    EXPECT_EQ(p.num_blocks, 1u);
    EXPECT_EQ(p.candidates.front(), 2u);
    EXPECT_EQ(p.candidates.back(), 220u);
    EXPECT_FALSE(p.fano_margin_holds());  // 4 D^2 l + ln 2 = 2.69 > 2.35

    const auto q = swap_window_params(3000, 3, 0.1, 0.5);
    EXPECT_EQ(q.num_candidates, 22u);
    EXPECT_EQ(q.window_length, 20u);
    EXPECT_TRUE(q.fano_margin_holds());
}

TEST(SwapWindowParams, Errors) {
    EXPECT_THROW(swap_window_params(10, 3, 0.5, 0.5), ParameterError);  // D^2 T = 2.5 < 3
    try {
        swap_window_params(3000, 4, 0.5, 0.5);
        FAIL();
    } catch (const ParameterError& e) {
        EXPECT_NE(std::string(e.what()).find("parity"), std::string::npos);
    }
    EXPECT_THROW(swap_window_params(3001, 5, 0.3, 0.5), ParameterError);  // 2T/(L-1) not integral
    EXPECT_THROW(swap_window_params(3000, 3, 0.5, 0.4), ParameterError);  // gap > S
    EXPECT_NO_THROW(swap_window_params(3000, 3, 0.5, 0.5));  // S - gap = 0 is allowed
}

TEST(SwapWindowParams, InvariantsOverGrid) {
    for (std::size_t L : {3u, 5u, 9u, 21u})
        for (double gap : {0.05, 0.1, 0.2, 0.3, 0.45})
            for (Time T : {1200u, 6000u, 60000u}) {
                InstanceParams p;
                try {
                    p = swap_window_params(T, L, gap, 0.5);
                } catch (const ParameterError&) {
                    continue;
                }
                EXPECT_GE(p.num_candidates, 2u);
                EXPECT_LE(p.num_candidates * p.window_length, p.block_length - 2);
                EXPECT_EQ(p.block_length * (L - 1), 2 * T);
            }
}

TEST(SwapWindowInstance, Structure) {
    const auto p = swap_window_params(3000, 3, 0.5, 0.5);
    const auto s = swap_window_instance(p, {2});
    EXPECT_EQ(s.segment_count(1, 3000), 3u);
    for (Time t = 1; t <= 10; ++t) {
        const bool in_window = t == 2 || t == 3;
        EXPECT_EQ(s.mean(t, 0), in_window ? 0.0 : 1.0) << t;
        EXPECT_EQ(s.mean(t, 1), in_window ? 1.0 : 0.0) << t;
    }
    EXPECT_THROW(swap_window_instance(p, {3}), ContractError);
    EXPECT_THROW(swap_window_instance(p, {2, 2}), ContractError);
}

TEST(SwapWindowInstance, EverySampledInstanceIsInClass) {
    RandomStream rng(1);
    for (std::size_t L : {3u, 7u, 11u}) {
        const auto p = swap_window_params(3000, L, 0.3, 0.5);
        for (int k = 0; k < 20; ++k) {
            const auto s = swap_window_instance(p, sample_nu(p, rng));
            EXPECT_EQ(s.num_segments(), L);
            EXPECT_EQ(s.segment_count(1, p.horizon), L);
            EXPECT_TRUE(check_assumptions(s, 0.5).realizable);
            for (const auto& mu : s.all_segment_means()) {
                EXPECT_NEAR(std::abs(mu[0] - 0.5), 0.3, 1e-12);
                EXPECT_NEAR(mu[0] + mu[1], 1.0, 1e-12);
            }
        }
    }
}

TEST(SingleSwitchParams, ReferencePoint) {
    const auto p = single_switch_params(2000, 2, 0.5, 0.5);
    EXPECT_EQ(p.block_length, 2000u);
    EXPECT_EQ(p.num_candidates, 10u);
    EXPECT_EQ(p.window_length, 57u);
    EXPECT_EQ(p.split, 29u);
}

TEST(SingleSwitchParams, BoundaryAndShrink) {
    // D^2 T = 13 L exactly at T = 13 * 2 / 0.25 = 104; the recipe then has no room, so the
    // only error allowed is the feasibility one, not the D^2 T precondition.
    try {
        single_switch_params(104, 2, 0.5, 0.5);
    } catch (const ParameterError& e) {
        EXPECT_EQ(std::string(e.what()).find("13 L"), std::string::npos) << e.what();
    }
    EXPECT_THROW(single_switch_params(100, 2, 0.5, 0.5), ParameterError);
    EXPECT_THROW(single_switch_params(2000, 3, 0.5, 0.5), ParameterError);
    for (Time T : {1500u, 4000u, 20000u, 100000u})
        for (double gap : {0.2, 0.3, 0.45}) {
            InstanceParams p;
            try {
                p = single_switch_params(T, 2, gap, 0.5);
            } catch (const ParameterError&) {
                continue;
            }
            EXPECT_GE(p.num_candidates, 2u);
            EXPECT_LE(p.num_candidates * p.window_length, p.block_length - 1);
            EXPECT_EQ(p.window_length,
                      std::size_t(std::ceil(6.0 * std::log(double(p.num_candidates)) / (gap * gap))) + 1);
        }
}

TEST(SingleSwitchInstance, Structure) {
    const auto p = single_switch_params(8000, 4, 0.5, 0.5);
    const auto s = single_switch_instance(p, {2, p.candidates.back()});
    EXPECT_EQ(s.segment_count(1, p.horizon), 4u);
    // nu = 2: pre-change region is just the first round of the block.
    EXPECT_EQ(s.mean(1, 1), 1.0);
    EXPECT_EQ(s.mean(2, 1), 0.0);
    const Time start2 = p.block_length + 1;
    EXPECT_EQ(s.mean(start2, 1), 1.0);
    EXPECT_EQ(s.mean(p.absolute(1, p.candidates.back()), 0), 1.0);
    EXPECT_TRUE(check_assumptions(s, 0.5).realizable);
}

TEST(SampleNu, FrequenciesAndDeterminism) {
    const auto p = swap_window_params(3000, 3, 0.3, 0.5);
    RandomStream a(5), b(5);
    EXPECT_EQ(sample_nu(p, a), sample_nu(p, b));
    std::vector<std::size_t> counts(p.num_candidates, 0);
    const int draws = 100000;
    RandomStream rng(6);
    for (int i = 0; i < draws; ++i) ++counts[candidate_index(p, sample_nu(p, rng)[0])];
    const double q = 1.0 / double(p.num_candidates);
    const double sd = std::sqrt(draws * q * (1 - q));
    for (auto c : counts) EXPECT_NEAR(double(c), draws * q, 5 * sd);
}

TEST(AlternatingInstance, EqualSpacing) {
    const auto s = alternating_instance(4096, 8, 0.3, 0.5);
    EXPECT_EQ(s.num_segments(), 8u);
    for (std::size_t l = 0; l < 8; ++l) EXPECT_EQ(s.segment_start(l), 1 + l * 512);
    EXPECT_EQ(alternating_instance(100, 1, 0.3, 0.5).num_segments(), 1u);
}

TEST(FeasibleHorizon, RoundsDown) {
    EXPECT_EQ(feasible_horizon(Family::swap_window, 3001, 3), 3001u);
    EXPECT_EQ(feasible_horizon(Family::swap_window, 3001, 5), 3000u);
    EXPECT_EQ(feasible_horizon(Family::single_switch, 2001, 2), 2001u);
    EXPECT_EQ(feasible_horizon(Family::single_switch, 2000, 6), 1998u);
}
