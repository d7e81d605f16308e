#include <gtest/gtest.h>

#include <cmath>

#include "satbandit/hard_instances.hpp"
#include "satbandit/policies.hpp"

using namespace satbandit;

namespace {

Environment zero_noise(MeanSchedule s, double S = 0.5) { return Environment(std::move(s), S, NoiseKind::zero); }

std::vector<Time> cps_of(const Environment& env) {
    const auto cps = env.schedule.change_points();
    return {cps.begin(), cps.end()};
}

std::vector<Arm> play(const Environment& env, Policy& pol, std::uint64_t noise_seed = 1) {
    RandomStream noise(noise_seed);
    return run_episode(env, pol, noise).transcript.actions;
}

}  // namespace

TEST(NonstationarySat, PromotesSatisficingArmImmediately) {
    const auto env = zero_noise(MeanSchedule::constant(20, {0.9, 0.1}));
    NonstationarySat pol(2, 0.5, RadiusFn::zero());
    RandomStream noise(1);
    const auto res = run_episode(env, pol, noise);
    EXPECT_EQ(res.transcript.actions, std::vector<Arm>(20, 0));
    EXPECT_EQ(res.regret, 0.0);
    EXPECT_EQ(pol.leader(), Arm{0});
    EXPECT_EQ(pol.epoch(0), 2u);
    EXPECT_EQ(pol.buffer(0).size(), 19u);
}

TEST(NonstationarySat, ExploresPastNonSatisficingArm) {
    const auto env = zero_noise(MeanSchedule::constant(10, {0.1, 0.9}));
    NonstationarySat pol(2, 0.5, RadiusFn::zero());
    RandomStream noise(1);
    const auto res = run_episode(env, pol, noise);
    EXPECT_EQ(res.transcript.actions[0], 0u);
    for (Time t = 2; t <= 10; ++t) EXPECT_EQ(res.transcript.actions[t - 1], 1u) << t;
    EXPECT_NEAR(res.regret, 0.4, 1e-12);
}

TEST(NonstationarySat, DemotionThenPersistentRoundRobin) {
    // (0.9, 0.1) on [1, 5], (0.1, 0.9) on [6, 12].
    const auto env = zero_noise(MeanSchedule(2, 12, {1, 6, 13}, {{0.9, 0.1}, {0.1, 0.9}}));
    NonstationarySat pol(2, 0.5, RadiusFn::zero());
    RandomStream noise(1);
    std::vector<std::optional<Arm>> leader_after(13);
    for (Time t = 1; t <= 12; ++t) {
        const Arm a = pol.select(t);
        pol.update(t, a, sample_reward(env, t, a, noise));
        leader_after[t] = pol.leader();
    }
    for (Time t = 1; t <= 5; ++t) EXPECT_EQ(leader_after[t], Arm{0}) << t;
    EXPECT_FALSE(leader_after[6].has_value());  // w = 1 window sees 0.1 < S
    EXPECT_EQ(pol.demotions(), 1u);
    // The pointer advanced past arm 0 on the t = 1 exploration pull, so t = 7 pulls arm 1.
    EXPECT_EQ(leader_after[7], Arm{1});
    EXPECT_EQ(pol.exploration_rounds(), 2u);
    EXPECT_EQ(pol.epoch(0), 3u);
    EXPECT_EQ(pol.epoch(1), 2u);
}

TEST(NonstationarySat, OutOfOrderCallsThrow) {
    NonstationarySat pol(2, 100, 0.5);
    EXPECT_THROW(pol.update(1, 0, 0.3), ContractError);
    EXPECT_THROW(pol.select(2), ContractError);
    const Arm a = pol.select(1);
    EXPECT_THROW(pol.select(1), ContractError);
    EXPECT_THROW(pol.update(1, 1 - a, 0.3), ContractError);
    pol.update(1, a, 0.3);
    EXPECT_NO_THROW(pol.select(2));
}

TEST(NonstationarySat, SingleLeaderAndNoOtherPullsDuringLeaderPeriod) {
    const auto p = swap_window_params(3000, 5, 0.4, 0.5);
    RandomStream rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const auto env = hard_environment(p, sample_nu(p, rng));
        NonstationarySat pol(2, p.horizon, 0.5);
        RandomStream noise(100 + trial);
        for (Time t = 1; t <= p.horizon; ++t) {
            const auto before = pol.leader();
            const Arm a = pol.select(t);
            if (before) {
                ASSERT_EQ(a, *before);
            }
            pol.update(t, a, sample_reward(env, t, a, noise));
        }
    }
}

TEST(NonstationarySat, ExplorationRoundsWithinNDeltaBound) {
    const Time T = 20000;
    const double S = 0.5, gap = 0.4;
    const std::size_t K = 2;
    const double cap = 2.0 * K * (8.0 * (4.0 * std::log(double(T)) + std::log(double(K))) / (gap * gap) + 1.0);
    const Environment env(MeanSchedule::constant(T, {S + gap, S - gap}), S);
    int within = 0;
    const int seeds = 200;
    for (int s = 0; s < seeds; ++s) {
        NonstationarySat pol(K, T, S);
        RandomStream noise(derive_seed(5, "explore", s));
        run_episode(env, pol, noise);
        within += double(pol.exploration_rounds()) <= cap;
    }
    EXPECT_GE(within, 198);
}

TEST(SimpleSat, SweepThenArgmax) {
    const auto env = zero_noise(MeanSchedule::constant(10, {0.9, 0.1}));
    SimpleSat pol(2, 0.5, 7);
    const auto a = play(env, pol);
    EXPECT_EQ(a[0], 0u);
    EXPECT_EQ(a[1], 1u);
    for (Time t = 3; t <= 10; ++t) EXPECT_EQ(a[t - 1], 0u);
}

TEST(SimpleSat, UniformWhenNothingClearsThreshold) {
    const Time T = 200002;
    const auto env = zero_noise(MeanSchedule::constant(T, {0.3, 0.2}));
    SimpleSat pol(2, 0.5, 11);
    const auto a = play(env, pol);
    std::size_t ones = 0;
    for (Time t = 3; t <= T; ++t) ones += a[t - 1];
    const double n = double(T - 2);
    EXPECT_NEAR(double(ones) / n, 0.5, 5.0 * 0.5 / std::sqrt(n));
}

TEST(SimpleSat, TiesGoToLowestIndex) {
    const auto env = zero_noise(MeanSchedule::constant(8, {0.2, 0.7, 0.7}));
    SimpleSat pol(3, 0.5, 1);
    const auto a = play(env, pol);
    for (Time t = 4; t <= 8; ++t) EXPECT_EQ(a[t - 1], 1u);
}

TEST(SimpleSat, NeverPrefersSubThresholdArmUnderZeroNoise) {
    // Arm 0 always satisficing, arm 1 crosses up.
    const auto env = zero_noise(MeanSchedule(3, 400, {1, 201, 401}, {{0.8, 0.2, 0.3}, {0.8, 0.7, 0.3}}));
    SimpleSat pol(3, 0.5, 2);
    RandomStream noise(0);
    for (Time t = 1; t <= 400; ++t) {
        const Arm a = pol.select(t);
        if (t > 3) {
            bool someone_satisfies = false;
            for (Arm b = 0; b < 3; ++b) someone_satisfies |= pol.pulls(b) > 0 && pol.empirical_mean(b) >= 0.5;
            if (someone_satisfies) {
                EXPECT_GE(pol.empirical_mean(a), 0.5);
            }
        }
        pol.update(t, a, sample_reward(env, t, a, noise));
    }
}

TEST(SimpleSat, ResetReplaysActions) {
    const Environment env(MeanSchedule::constant(300, {0.45, 0.4}), 0.5);
    SimpleSat pol(2, 0.5, 9);
    const auto first = play(env, pol, 4);
    pol.reset();
    EXPECT_EQ(play(env, pol, 4), first);
}

TEST(OracleRestart, SingleSegmentMatchesSimpleSat) {
    const Environment env(MeanSchedule::constant(500, {0.45, 0.55, 0.4}), 0.5);
    SimpleSat simple(3, 0.5, 21);
    OracleRestart oracle(3, 0.5, {1, 501}, 21);
    EXPECT_EQ(play(env, simple, 8), play(env, oracle, 8));
}

TEST(OracleRestart, ZeroNoiseRegretIsPerSegmentSweep) {
    // Each segment costs one wrong pull of size 0.4 during the restart sweep.
    for (Time T : {10u, 100u, 1000u}) {
        const auto env = zero_noise(MeanSchedule(2, T, {1, T / 2 + 1, T + 1}, {{0.9, 0.1}, {0.1, 0.9}}));
        OracleRestart pol(2, 0.5, cps_of(env), 3);
        RandomStream noise(0);
        EXPECT_NEAR(run_episode(env, pol, noise).regret, 0.8, 1e-12) << T;
    }
}

TEST(OracleRestart, RegretGrowsWithSegmentsOnSwapWindow) {
    auto mean_regret = [](std::size_t L) {
        const auto p = swap_window_params(6000, L, 0.4, 0.5);
        double total = 0.0;
        const int reps = 200;
        for (int r = 0; r < reps; ++r) {
            RandomStream inst(derive_seed(1, "inst", r));
            const auto env = hard_environment(p, sample_nu(p, inst));
            OracleRestart pol(2, 0.5, cps_of(env), derive_seed(1, "pol", r));
            RandomStream noise(derive_seed(1, "noise", r));
            total += run_episode(env, pol, noise).regret;
        }
        return total / reps;
    };
    const double r3 = mean_regret(3), r7 = mean_regret(7), r13 = mean_regret(13);
    EXPECT_LT(r3, r7);
    EXPECT_LT(r7, r13);
    // Roughly linear in L: per-segment cost stays within a factor 3.
    const double a = r3 / 3.0, c = r13 / 13.0;
    EXPECT_LT(std::max(a, c) / std::min(a, c), 3.0);
}

TEST(RunEpisode, FixedArmBaselines) {
    const Environment env(MeanSchedule::constant(100, {0.8, 0.3}), 0.5);
    FixedArm good(0), bad(1);
    RandomStream n1(1), n2(1);
    EXPECT_EQ(run_episode(env, good, n1).regret, 0.0);
    EXPECT_NEAR(run_episode(env, bad, n2).regret, 0.2 * 100, 1e-9);
}

TEST(RunEpisode, Deterministic) {
    const auto p = swap_window_params(900, 3, 0.3, 0.5);
    RandomStream rng(2);
    const auto env = hard_environment(p, sample_nu(p, rng));
    NonstationarySat a(2, 900, 0.5), b(2, 900, 0.5);
    RandomStream na(42), nb(42);
    const auto ra = run_episode(env, a, na), rb = run_episode(env, b, nb);
    EXPECT_EQ(ra.transcript.actions, rb.transcript.actions);
    EXPECT_EQ(ra.transcript.rewards, rb.transcript.rewards);
    EXPECT_EQ(ra.regret, rb.regret);
}

TEST(RunEpisode, RejectsArmOutsideRange) {
    const Environment env(MeanSchedule::constant(5, {0.8, 0.3}), 0.5);
    FixedArm pol(2);
    RandomStream noise(0);
    EXPECT_THROW(run_episode(env, pol, noise), ContractError);
}

TEST(Baselines, RoundRobinAndUniform) {
    RoundRobin rr(3);
    for (Time t = 1; t <= 9; ++t) EXPECT_EQ(rr.select(t), (t - 1) % 3);
    UniformRandom u(4, 5), v(4, 5);
    for (Time t = 1; t <= 50; ++t) EXPECT_EQ(u.select(t), v.select(t));
}
