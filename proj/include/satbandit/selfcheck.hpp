#pragma once
// Fast invariant suite behind `satbandit selfcheck`.

#include <cmath>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "satbandit/estimators.hpp"
#include "satbandit/harness.hpp"
#include "satbandit/hard_instances.hpp"
#include "satbandit/info_bounds.hpp"
#include "satbandit/policies.hpp"
#include "satbandit/windowed_stats.hpp"

namespace satbandit {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

namespace detail {

inline CheckResult check_windowed_fixture() {
    EpochBuffer b;
    for (double x : {0.9, 0.9, 0.9, 0.9, 0.1}) b.append(x);
    const RadiusFn zero = RadiusFn::zero();
    const bool ok = std::abs(lcb_win(b, zero) - 0.7) < 1e-12 && std::abs(ucb_win(b, zero) - 0.1) < 1e-12 &&
                    win_set(5) == std::vector<std::size_t>{1, 2, 4} && std::isinf(lcb_win(EpochBuffer{}, zero));
    return {"windowed statistics fixture", ok, ""};
}

inline CheckResult check_choose_n() {
    for (std::size_t y = 4; y <= 100000; ++y) {
        const double x = static_cast<double>(lemma1_choose_n(static_cast<double>(y)));
        const double yd = static_cast<double>(y);
        if (!(x * std::log(x) <= yd && std::log(x) >= 0.5 * std::log(yd)))
            return {"choose_n on [4, 1e5]", false, "fails at y=" + std::to_string(y)};
    }
    return {"choose_n on [4, 1e5]", true, ""};
}

inline CheckResult check_hard_instances_and_regret(std::uint64_t seed) {
    RandomStream rng(seed);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t L = 3 + 2 * rng.uniform_index(3);
        const Time T = (L - 1) * (200 + rng.uniform_index(200));
        const double gap = 0.1 + 0.3 * static_cast<double>(rng.uniform_index(100)) / 100.0;
        InstanceParams p;
        try {
            p = swap_window_params(T, L, gap, 0.5);
        } catch (const ParameterError&) {
            continue;
        }
        const NuVector nu = sample_nu(p, rng);
        const Environment env = hard_environment(p, nu);
        if (env.schedule.num_segments() != L || env.schedule.segment_count(1, T) != L)
            return {"hard instance structure and regret identity", false, "segment count mismatch"};
        UniformRandom pol(2, rng.uniform_index(1u << 30));
        RandomStream noise(trial);
        const auto res = run_episode(env, pol, noise);
        std::size_t blocks_total = 0;
        for (auto m : *res.transcript.wrong_pull_counts) blocks_total += m;
        const double direct = satisficing_regret(env.schedule, 0.5, res.transcript.actions);
        if (blocks_total != res.wrong_pulls || std::abs(direct - res.regret) > 1e-9 ||
            std::abs(res.regret - gap * static_cast<double>(res.wrong_pulls)) > 1e-9 * std::max(1.0, res.regret))
            return {"hard instance structure and regret identity", false, "regret != delta * wrong pulls"};
        for (std::size_t b = 0; b < p.num_blocks; ++b) {
            const BlockView v = BlockView::slice(res.transcript, p, b);
            const bool q = 4 * (*res.transcript.wrong_pull_counts)[b] <= p.window_length;
            if (q && argmax_nu_estimator(v) != nu[b])
                return {"hard instance structure and regret identity", false, "argmax implication violated"};
        }
    }
    return {"hard instance structure and regret identity", true, ""};
}

inline CheckResult check_kl_identity() {
    const InstanceParams p = swap_window_params(3000, 5, 0.3, 0.5);
    const NuVector nu(p.num_blocks, p.candidates.front());
    std::vector<Arm> actions(p.horizon);
    for (Time t = 0; t < p.horizon; ++t) actions[t] = (t * 7919) % 3 == 0;
    for (std::size_t i = 0; i < p.num_candidates; i += 3)
        for (std::size_t j = 0; j < p.num_candidates; j += 5) {
            const double closed = swap_family_pairwise_kl(p, p.candidates[i], p.candidates[j]);
            const double brute =
                swap_family_pairwise_kl_bruteforce(p, nu, 1, p.candidates[i], p.candidates[j], actions);
            if (std::abs(closed - brute) > 1e-12) return {"pairwise KL closed form", false, "mismatch"};
        }
    return {"pairwise KL closed form", true, ""};
}

inline CheckResult check_determinism() {
    ExperimentConfig cfg;
    cfg.family = "swap-window";
    cfg.policies = {"nonstat-sat", "simple-sat", "uniform"};
    cfg.horizons = {600};
    cfg.segments = {3, 5};
    cfg.gaps = {0.4};
    cfg.replications = 6;
    cfg.master_seed = 99;
    std::ostringstream sink;
    cfg.threads = 1;
    const std::string a = records_csv(run_experiment(cfg, sink));
    const std::string b = records_csv(run_experiment(cfg, sink));
    cfg.threads = 3;
    const std::string c = records_csv(run_experiment(cfg, sink));
    return {"byte-identical output across runs and thread counts", a == b && a == c, ""};
}

inline CheckResult check_n_delta() {
    RandomStream rng(5);
    for (int i = 0; i < 200; ++i) {
        const Time T = 2 + rng.uniform_index(100000);
        const std::size_t K = 1 + rng.uniform_index(20);
        const double gap = 0.01 + 0.98 * static_cast<double>(rng.uniform_index(1000)) / 1000.0;
        const auto n = n_delta(T, K, gap);
        const double cap = 8.0 * (4.0 * std::log(double(T)) + std::log(double(K))) / (gap * gap) + 1.0;
        if (n.has_value() == (beta(T, T, K) > gap / 2) || (n && double(*n) > cap))
            return {"n_delta existence and bound", false, "T=" + std::to_string(T)};
    }
    return {"n_delta existence and bound", true, ""};
}

}  // namespace detail

inline std::vector<CheckResult> run_selfcheck(std::uint64_t seed = 0) {
    std::vector<std::function<CheckResult()>> checks{
        detail::check_windowed_fixture,
        detail::check_choose_n,
        [seed] { return detail::check_hard_instances_and_regret(seed); },
        detail::check_kl_identity,
        detail::check_n_delta,
        detail::check_determinism,
    };
    std::vector<CheckResult> out;
    for (auto& c : checks) {
        try {
            out.push_back(c());
        } catch (const std::exception& e) {
            out.push_back({"(check threw)", false, e.what()});
        }
    }
    return out;
}

} // namespace satbandit
