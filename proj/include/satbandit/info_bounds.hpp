#pragma once
// Closed-form information quantities and regret-bound evaluators.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>

#include "satbandit/env.hpp"
#include "satbandit/hard_instances.hpp"

namespace satbandit {

/// KL(N(mu1, 1) || N(mu2, 1)).
inline double gaussian_kl(double mu1, double mu2) {
    const double d = mu1 - mu2;
    return 0.5 * d * d;
}

/// Transcript KL between two swap-window instances that differ only in one
/// block's window position: 4 D^2 l for distinct positions, 0 otherwise.
inline double swap_family_pairwise_kl(const InstanceParams& p, Time tau, Time tau_prime) {
    if (tau == tau_prime) return 0.0;
    return 4.0 * p.gap * p.gap * static_cast<double>(p.window_length);
}

/// The same quantity summed round by round: block `block` of `nu` is set to tau
/// (resp. tau_prime) and each round adds the unit-Gaussian KL of the pulled
/// arm's reward law. The per-round KL does not depend on the arm on these
/// families, so any action sequence gives the same total.
inline double swap_family_pairwise_kl_bruteforce(const InstanceParams& p, NuVector nu, std::size_t block, Time tau,
                                                 Time tau_prime, std::span<const Arm> actions) {
    if (actions.size() != p.horizon) throw ContractError("brute-force KL: need one action per round");
    nu.at(block) = tau;
    const MeanSchedule first = swap_window_instance(p, nu);
    nu.at(block) = tau_prime;
    const MeanSchedule second = swap_window_instance(p, nu);
    double total = 0.0;
    for (Time t = 1; t <= p.horizon; ++t) {
        const Arm a = actions[t - 1];
        total += gaussian_kl(first.mean(t, a), second.mean(t, a));
    }
    return total;
}

/// Average of the pairwise KL over ordered candidate pairs (diagonal included).
inline double swap_family_average_kl(const InstanceParams& p) {
    const double n = static_cast<double>(p.num_candidates);
    return 4.0 * p.gap * p.gap * static_cast<double>(p.window_length) * (n - 1.0) / n;
}

/// 1 - (I + ln 2) / ln V. Unclamped: negative values mean the bound is vacuous.
inline double fano_rhs(double mutual_info, std::size_t num_hypotheses) {
    if (num_hypotheses < 2) throw std::domain_error("fano_rhs: need at least two hypotheses");
    return 1.0 - (mutual_info + std::log(2.0)) / std::log(static_cast<double>(num_hypotheses));
}

/// Conditional form with the mutual information replaced by the average pairwise KL.
inline double conditional_fano_rhs(double pairwise_kl_average, std::size_t num_hypotheses) {
    if (num_hypotheses < 2) throw std::domain_error("conditional_fano_rhs: need at least two hypotheses");
    return 1.0 - (pairwise_kl_average + std::log(2.0)) / std::log(static_cast<double>(num_hypotheses));
}

/// sum_l sum_{a: mu_{a,l} < S} (1/gap_{a,l} + gap_{a,l} / gap*_l^2) ln T,
/// with gap_{a,l} = S - mu_{a,l} and gap*_l = max_a mu_{a,l} - S.
inline double thm3_bound(const MeanSchedule& schedule, double threshold, Time horizon) {
    if (!check_assumptions(schedule, threshold).realizable)
        throw std::domain_error("thm3_bound: some segment has no arm strictly above S");
    const double log_t = std::log(static_cast<double>(horizon));
    double total = 0.0;
    for (const auto& mu : schedule.all_segment_means()) {
        const double best_gap = *std::max_element(mu.begin(), mu.end()) - threshold;
        for (double m : mu) {
            if (m >= threshold) continue;
            const double g = threshold - m;
            total += (1.0 / g + g / (best_gap * best_gap)) * log_t;
        }
    }
    return total;
}

/// sum_{a: gap_{a,min} > 0} gap_{a,max} (1 + 1/gap_{a,min}^2 + 1/gap*^2), where
/// gap_{a,min/max} range over segments with a below S and gap* is the smallest
/// margin of the always-realizable arm. With several such arms the largest
/// margin is used.
inline double thm4_bound(const MeanSchedule& schedule, double threshold) {
    const AssumptionFlags flags = check_assumptions(schedule, threshold);
    if (!flags.always_realizable || !flags.no_down_crossing)
        throw std::domain_error("thm4_bound: needs an always-realizable arm and no down-crossings");
    const auto& segs = schedule.all_segment_means();
    double star_gap = 0.0;
    for (Arm a = 0; a < schedule.num_arms(); ++a) {
        double margin = std::numeric_limits<double>::infinity();
        for (const auto& mu : segs) margin = std::min(margin, mu[a] - threshold);
        star_gap = std::max(star_gap, margin);
    }
    double total = 0.0;
    for (Arm a = 0; a < schedule.num_arms(); ++a) {
        double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
        for (const auto& mu : segs) {
            if (mu[a] >= threshold) continue;
            lo = std::min(lo, threshold - mu[a]);
            hi = std::max(hi, threshold - mu[a]);
        }
        if (hi == 0.0) continue;
        total += hi * (1.0 + 1.0 / (lo * lo) + 1.0 / (star_gap * star_gap));
    }
    return total;
}

} // namespace satbandit
