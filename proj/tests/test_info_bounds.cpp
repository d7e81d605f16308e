#include <gtest/gtest.h>

#include <cmath>

#include "satbandit/harness.hpp"
#include "satbandit/info_bounds.hpp"

using namespace satbandit;

TEST(GaussianKl, Examples) {
    EXPECT_NEAR(gaussian_kl(0.8, 0.2), 0.18, 1e-15);
    EXPECT_EQ(gaussian_kl(0.4, 0.4), 0.0);
    EXPECT_NEAR(gaussian_kl(0.5 + 0.3, 0.5 - 0.3), 2 * 0.09, 1e-15);
}

TEST(PairwiseKl, ClosedForm) {
    auto p = swap_window_params(3000, 3, 0.3, 0.5);
    EXPECT_EQ(swap_family_pairwise_kl(p, p.candidates[0], p.candidates[0]), 0.0);
    p.window_length = 10;
    EXPECT_NEAR(swap_family_pairwise_kl(p, 2, 12), 3.6, 1e-12);
}

TEST(PairwiseKl, MatchesBruteForceOnAllPairs) {
    RandomStream rng(31);
    const auto p = swap_window_params(1800, 5, 0.25, 0.5);
    const NuVector nu = sample_nu(p, rng);
    std::vector<Arm> actions(p.horizon);
    for (auto& a : actions) a = rng.uniform_index(2);
    for (std::size_t b = 0; b < p.num_blocks; ++b)
        for (Time tau : p.candidates)
            for (Time tau2 : p.candidates)
                ASSERT_NEAR(swap_family_pairwise_kl(p, tau, tau2),
                            swap_family_pairwise_kl_bruteforce(p, nu, b, tau, tau2, actions), 1e-12);
}

TEST(Fano, Examples) {
    EXPECT_NEAR(fano_rhs(0.0, 2), 0.0, 1e-15);
    EXPECT_NEAR(fano_rhs(std::log(2.0), 8), 1.0 / 3.0, 1e-15);
    EXPECT_LT(fano_rhs(100.0, 4), 0.0);
    EXPECT_THROW(fano_rhs(0.0, 1), std::domain_error);
    EXPECT_NEAR(conditional_fano_rhs(0.0, 4), 0.5, 1e-15);
    const auto p = swap_window_params(3000, 3, 0.5, 0.5);
    EXPECT_NEAR(conditional_fano_rhs(swap_family_average_kl(p), p.num_candidates), 0.4309165969833434, 1e-12);
}

TEST(Fano, MarginImpliesHalf) {
    for (double gap : {0.05, 0.1, 0.15})
        for (Time T : {3000u, 30000u}) {
            const auto p = swap_window_params(T, 3, gap, 0.5);
            if (!p.fano_margin_holds()) continue;
            EXPECT_GE(conditional_fano_rhs(swap_family_average_kl(p), p.num_candidates), 0.5);
        }
}

TEST(ScalingBound, AlternatingFamily) {
    for (std::size_t L : {1u, 2u, 4u}) {
        const auto s = alternating_instance(4096, L, 0.3, 0.5);
        EXPECT_NEAR(thm3_bound(s, 0.5, 4096), 2.0 * L * std::log(4096.0) / 0.3, 1e-9);
        EXPECT_NEAR(thm3_bound(s, 0.5, 8192) - thm3_bound(s, 0.5, 4096), 2.0 * L / 0.3 * std::log(2.0), 1e-9);
    }
    const auto none_below = MeanSchedule::constant(10, {0.7, 0.9});
    EXPECT_EQ(thm3_bound(none_below, 0.5, 10), 0.0);
    EXPECT_THROW(thm3_bound(MeanSchedule::constant(10, {0.4}), 0.5, 10), std::domain_error);
}

TEST(ConstantBound, Examples) {
    EXPECT_NEAR(thm4_bound(InstanceFactory::step_up_instance(1 << 16), 0.5), 14.38888888888889, 1e-9);
    EXPECT_EQ(thm4_bound(InstanceFactory::step_up_instance(1 << 13), 0.5),
              thm4_bound(InstanceFactory::step_up_instance(1 << 16), 0.5));
    // Single segment: gap_min = gap_max per arm.
    const double stationary = thm4_bound(MeanSchedule::constant(10, {0.8, 0.3}), 0.5);
    EXPECT_NEAR(stationary, 0.2 * (1.0 + 1.0 / 0.04 + 1.0 / 0.09), 1e-12);
    EXPECT_EQ(thm4_bound(MeanSchedule::constant(10, {0.8, 0.6}), 0.5), 0.0);
    const auto p = swap_window_params(300, 3, 0.3, 0.5);
    EXPECT_THROW(thm4_bound(swap_window_instance(p, {2}), 0.5), std::domain_error);
}
