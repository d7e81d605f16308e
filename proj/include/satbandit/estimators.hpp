#pragma once
// Block-level estimators of the latent position nu_l on hard instances.
//
// Positions are in-block (1-based); a window at candidate tau covers the
// in-block rounds [tau, tau + l - 1].

#include <cstddef>
#include <optional>
#include <span>
#include <string>

#include "satbandit/env.hpp"
#include "satbandit/errors.hpp"
#include "satbandit/hard_instances.hpp"
#include "satbandit/policies.hpp"

namespace satbandit {

/// Arm 0: satisficing outside the swap window and after the single switch.
inline constexpr Arm kOffWindowArm = 0;
/// Arm 1: satisficing inside the swap window and before the single switch.
inline constexpr Arm kWindowArm = 1;

/// Transcript restricted to one block. Holds views into the transcript and
/// params it was sliced from; both must outlive it.
struct BlockView {
    std::size_t block = 0;  // 0-based
    Time first_round = 1;   // absolute round of in-block position 1
    std::span<const Arm> actions;
    std::span<const double> rewards;
    std::span<const Time> candidates;
    std::size_t window_length = 0;
    std::size_t split = 0;
    double threshold = 0.0;

    static BlockView slice(const Transcript& z, const InstanceParams& p, std::size_t block) {
        if (block >= p.num_blocks) throw std::out_of_range("block index out of range");
        if (z.actions.size() != p.horizon || z.rewards.size() != p.horizon)
            throw ContractError("BlockView: transcript length must equal T");
        const std::size_t off = block * p.block_length;
        BlockView v;
        v.block = block;
        v.first_round = off + 1;
        v.actions = std::span<const Arm>(z.actions).subspan(off, p.block_length);
        v.rewards = std::span<const double>(z.rewards).subspan(off, p.block_length);
        v.candidates = p.candidates;
        v.window_length = p.window_length;
        v.split = p.split;
        v.threshold = p.threshold;
        return v;
    }

    Arm action_at(Time pos) const { return actions[pos - 1]; }
    double reward_at(Time pos) const { return rewards[pos - 1]; }
};

/// Number of arm-1 pulls inside the window starting at tau.
inline std::size_t window_counter(const BlockView& v, Time tau) {
    std::size_t count = 0;
    for (Time pos = tau; pos < tau + v.window_length; ++pos)
        if (v.action_at(pos) == kWindowArm) ++count;
    return count;
}

/// Candidate with the most arm-1 pulls in its window; ties go to the lowest candidate.
inline Time argmax_nu_estimator(const BlockView& v) {
    Time best = v.candidates.front();
    std::size_t best_count = window_counter(v, best);
    for (Time tau : v.candidates.subspan(1)) {
        const std::size_t c = window_counter(v, tau);
        if (c > best_count) {
            best = tau;
            best_count = c;
        }
    }
    return best;
}

namespace detail {

struct WindowSummary {
    std::size_t pulls = 0;  // pulls of the requested arm in the window
    double first_mean = 0;  // mean of its first `need` rewards, valid if pulls >= need
};

inline WindowSummary summarize_window(const BlockView& v, Time tau, Arm arm, std::size_t need) {
    WindowSummary s;
    double sum = 0.0;
    for (Time pos = tau; pos < tau + v.window_length; ++pos) {
        if (v.action_at(pos) != arm) continue;
        if (s.pulls < need) sum += v.reward_at(pos);
        ++s.pulls;
    }
    if (need > 0 && s.pulls >= need) s.first_mean = sum / static_cast<double>(need);
    return s;
}

}  // namespace detail

/// Smallest tau with >= r arm-0 pulls in its window whose first r arm-0 rewards average >= S.
inline std::optional<Time> changepoint_estimator_prime(const BlockView& v) {
    const std::size_t r = v.split;
    if (r < 1 || r > v.window_length) throw ContractError("prime estimator: need 1 <= r <= l");
    for (Time tau : v.candidates) {
        const auto s = detail::summarize_window(v, tau, kOffWindowArm, r);
        if (s.pulls >= r && s.first_mean >= v.threshold) return tau;
    }
    return std::nullopt;
}

/// Smallest tau with < r arm-0 pulls in its window whose first l - r arm-1
/// rewards average <= S.
inline std::optional<Time> changepoint_estimator_double_prime(const BlockView& v) {
    const std::size_t r = v.split;
    if (r < 1 || r >= v.window_length) throw ContractError("double-prime estimator: need 1 <= r and l - r >= 1");
    const std::size_t need = v.window_length - r;
    for (Time tau : v.candidates) {
        const auto s0 = detail::summarize_window(v, tau, kOffWindowArm, r);
        if (s0.pulls >= r) continue;
        const auto s1 = detail::summarize_window(v, tau, kWindowArm, need);
        if (s1.pulls >= need && s1.first_mean <= v.threshold) return tau;
    }
    return std::nullopt;
}

/// coin = false selects the prime estimator, true the double-prime one.
inline std::optional<Time> mixed_estimator(const BlockView& v, bool coin) {
    return coin ? changepoint_estimator_double_prime(v) : changepoint_estimator_prime(v);
}

/// 4 D^2 times the block's wrong pulls on a single-switch block with change at nu:
/// arm-0 pulls before nu plus arm-1 pulls from nu onward.
inline double info_budget(const BlockView& v, Time nu, double gap) {
    std::size_t wrong = 0;
    for (Time pos = 1; pos <= v.actions.size(); ++pos) {
        const Arm a = v.action_at(pos);
        if ((pos < nu && a == kOffWindowArm) || (pos >= nu && a == kWindowArm)) ++wrong;
    }
    return 4.0 * gap * gap * static_cast<double>(wrong);
}

/// Deterministic policy that fills every candidate window of a hard instance
/// with a fixed arm pattern: the first `arm0_pulls` rounds of each window pull
/// arm 0, the rest pull arm 1. Rounds outside windows pull arm 0.
class WindowSamplingPolicy final : public Policy {
public:
    WindowSamplingPolicy(const InstanceParams& p, std::size_t arm0_pulls, std::string name)
        : block_length_(p.block_length), window_length_(p.window_length), num_candidates_(p.num_candidates),
          arm0_pulls_(arm0_pulls), name_(std::move(name)) {}

    /// N_{l,tau} = r in every window: the prime estimator always has its r samples.
    static WindowSamplingPolicy for_prime(const InstanceParams& p) { return {p, p.split, "forced:prime"}; }
    /// N_{l,tau} = r - 1 and l - r + 1 arm-1 pulls in every window.
    static WindowSamplingPolicy for_double_prime(const InstanceParams& p) {
        return {p, p.split - 1, "forced:double-prime"};
    }

    Arm select(Time t) override {
        const Time pos = (t - 1) % block_length_ + 1;
        if (pos < 2) return kOffWindowArm;
        const std::size_t idx = (pos - 2) / window_length_;
        if (idx >= num_candidates_) return kOffWindowArm;
        const std::size_t j = (pos - 2) % window_length_;
        return j < arm0_pulls_ ? kOffWindowArm : kWindowArm;
    }
    void update(Time, Arm, double) override {}
    void reset() override {}
    std::string id() const override { return name_; }

private:
    Time block_length_;
    std::size_t window_length_;
    std::size_t num_candidates_;
    std::size_t arm0_pulls_;
    std::string name_;
};

} // namespace satbandit
