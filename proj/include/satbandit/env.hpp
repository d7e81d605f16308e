#pragma once
// Piecewise-stationary environments and satisficing regret.
//
// Conventions used across the library:
//   * rounds are 1-based, t in [1, T];
//   * arms are 0-based, a in [0, K);
//   * a schedule with L segments stores change points 1 = T_0 < ... < T_L = T + 1,
//     segment l covering rounds [T_l, T_{l+1} - 1].

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "satbandit/errors.hpp"
#include "satbandit/rng.hpp"

namespace satbandit {

using Arm = std::size_t;
using Time = std::size_t;

class MeanSchedule {
public:
    MeanSchedule(std::size_t num_arms, Time horizon, std::vector<Time> change_points,
                 std::vector<std::vector<double>> segment_means)
        : num_arms_(num_arms), horizon_(horizon), change_points_(std::move(change_points)),
          segment_means_(std::move(segment_means)) {
        validate();
    }

    /// Builds a schedule from a T x K matrix of per-round means, merging equal adjacent rows.
    static MeanSchedule from_dense(const std::vector<std::vector<double>>& per_round) {
        if (per_round.empty()) throw ParameterError("dense schedule: horizon must be positive");
        const std::size_t k = per_round.front().size();
        std::vector<Time> cps{1};
        std::vector<std::vector<double>> segs{per_round.front()};
        for (std::size_t i = 1; i < per_round.size(); ++i) {
            if (per_round[i].size() != k) throw ParameterError("dense schedule: ragged rows");
            if (per_round[i] != per_round[i - 1]) {
                cps.push_back(i + 1);
                segs.push_back(per_round[i]);
            }
        }
        cps.push_back(per_round.size() + 1);
        return MeanSchedule(k, per_round.size(), std::move(cps), std::move(segs));
    }

    static MeanSchedule constant(Time horizon, std::vector<double> means) {
        const std::size_t k = means.size();
        return MeanSchedule(k, horizon, {1, horizon + 1}, {std::move(means)});
    }

    std::size_t num_arms() const noexcept { return num_arms_; }
    Time horizon() const noexcept { return horizon_; }
    std::size_t num_segments() const noexcept { return segment_means_.size(); }
    std::span<const Time> change_points() const noexcept { return change_points_; }
    const std::vector<std::vector<double>>& all_segment_means() const noexcept { return segment_means_; }

    std::span<const double> segment_means(std::size_t segment) const {
        if (segment >= segment_means_.size()) throw std::out_of_range("segment index out of range");
        return segment_means_[segment];
    }
    Time segment_start(std::size_t segment) const { return change_points_.at(segment); }
    Time segment_end(std::size_t segment) const { return change_points_.at(segment + 1) - 1; }

    /// Index of the segment containing round t.
    std::size_t segment_of(Time t) const {
        check_round(t);
        auto it = std::upper_bound(change_points_.begin(), change_points_.end(), t);
        return static_cast<std::size_t>(it - change_points_.begin()) - 1;
    }

    std::span<const double> means_at(Time t) const { return segment_means_[segment_of(t)]; }

    double mean(Time t, Arm arm) const {
        if (arm >= num_arms_) throw std::out_of_range("arm index out of range");
        return means_at(t)[arm];
    }

    /// Number of stationary segments on [s, t].
    std::size_t segment_count(Time s, Time t) const {
        if (s < 1 || s > t || t > horizon_)
            throw std::out_of_range("segment_count: need 1 <= s <= t <= T");
        // Interior change points T_j in (s, t] each mark a change between T_j - 1 and T_j.
        auto lo = std::upper_bound(change_points_.begin() + 1, change_points_.end() - 1, s);
        auto hi = std::upper_bound(change_points_.begin() + 1, change_points_.end() - 1, t);
        return 1 + static_cast<std::size_t>(hi - lo);
    }

    /// Same schedule restricted to rounds [1, new_horizon].
    MeanSchedule truncated(Time new_horizon) const {
        if (new_horizon < 1 || new_horizon > horizon_) throw std::out_of_range("truncation horizon");
        const std::size_t last = segment_of(new_horizon);
        std::vector<Time> cps(change_points_.begin(), change_points_.begin() + last + 1);
        cps.push_back(new_horizon + 1);
        std::vector<std::vector<double>> segs(segment_means_.begin(), segment_means_.begin() + last + 1);
        return MeanSchedule(num_arms_, new_horizon, std::move(cps), std::move(segs));
    }

    friend bool operator==(const MeanSchedule&, const MeanSchedule&) = default;

private:
    void check_round(Time t) const {
        if (t < 1 || t > horizon_) throw std::out_of_range("round index out of range");
    }

    void validate() const {
        if (num_arms_ == 0) throw ParameterError("schedule: K must be positive");
        if (horizon_ == 0) throw ParameterError("schedule: T must be positive");
        if (change_points_.size() < 2 || change_points_.front() != 1 || change_points_.back() != horizon_ + 1)
            throw ParameterError("schedule: change points must run from 1 to T+1");
        for (std::size_t i = 1; i < change_points_.size(); ++i)
            if (change_points_[i] <= change_points_[i - 1])
                throw ParameterError("schedule: change points must be strictly increasing");
        if (segment_means_.size() != change_points_.size() - 1)
            throw ParameterError("schedule: need one mean vector per segment");
        for (std::size_t l = 0; l < segment_means_.size(); ++l) {
            if (segment_means_[l].size() != num_arms_)
                throw ParameterError("schedule: segment " + std::to_string(l) + " has wrong arm count");
            for (double mu : segment_means_[l])
                if (!(mu >= 0.0 && mu <= 1.0))
                    throw ParameterError("schedule: means must lie in [0, 1]");
            if (l > 0 && segment_means_[l] == segment_means_[l - 1])
                throw ParameterError("schedule: adjacent segments " + std::to_string(l - 1) + " and " +
                                     std::to_string(l) + " are identical");
        }
    }

    std::size_t num_arms_;
    Time horizon_;
    std::vector<Time> change_points_;
    std::vector<std::vector<double>> segment_means_;
};

inline std::size_t segment_count(const MeanSchedule& schedule, Time s, Time t) {
    return schedule.segment_count(s, t);
}

inline std::span<const double> means_at(const MeanSchedule& schedule, Time t) {
    return schedule.means_at(t);
}

enum class NoiseKind { unit_gaussian, zero };

/// Block metadata carried by hard instances: the horizon splits into
/// num_blocks consecutive blocks of block_length rounds.
struct BlockLayout {
    Time block_length = 0;
    std::size_t num_blocks = 0;

    std::size_t block_of(Time t) const { return (t - 1) / block_length; }
};

struct Environment {
    MeanSchedule schedule;
    double threshold;
    NoiseKind noise = NoiseKind::unit_gaussian;
    std::optional<BlockLayout> blocks;

    Environment(MeanSchedule sched, double s, NoiseKind kind = NoiseKind::unit_gaussian,
                std::optional<BlockLayout> layout = std::nullopt)
        : schedule(std::move(sched)), threshold(s), noise(kind), blocks(layout) {
        if (!std::isfinite(threshold)) throw ParameterError("threshold S must be finite");
        if (blocks && blocks->block_length * blocks->num_blocks != schedule.horizon())
            throw ParameterError("block layout must tile the horizon");
    }

    std::size_t num_arms() const noexcept { return schedule.num_arms(); }
    Time horizon() const noexcept { return schedule.horizon(); }
};

/// r_t = mu_t(arm) + xi. Zero-noise mode never touches the stream.
inline double sample_reward(const Environment& env, Time t, Arm arm, RandomStream& rng) {
    const double mu = env.schedule.mean(t, arm);
    if (env.noise == NoiseKind::zero) return mu;
    return mu + rng.normal();
}

struct Transcript {
    std::vector<Arm> actions;
    std::vector<double> rewards;
    /// Per-block non-satisficing pull counts M_l; present only for hard instances.
    std::optional<std::vector<std::size_t>> wrong_pull_counts;
};

struct AssumptionFlags {
    bool realizable = false;
    bool always_realizable = false;
    bool no_down_crossing = false;

    friend bool operator==(const AssumptionFlags&, const AssumptionFlags&) = default;
};

inline AssumptionFlags check_assumptions(const MeanSchedule& schedule, double threshold) {
    const auto& segs = schedule.all_segment_means();
    AssumptionFlags flags;
    flags.realizable = std::all_of(segs.begin(), segs.end(), [&](const auto& mu) {
        return *std::max_element(mu.begin(), mu.end()) > threshold;
    });
    for (Arm a = 0; a < schedule.num_arms() && !flags.always_realizable; ++a)
        flags.always_realizable =
            std::all_of(segs.begin(), segs.end(), [&](const auto& mu) { return mu[a] > threshold; });
    flags.no_down_crossing = true;
    for (Arm a = 0; a < schedule.num_arms(); ++a)
        for (std::size_t l = 1; l < segs.size(); ++l)
            if (segs[l - 1][a] >= threshold && segs[l][a] < threshold) flags.no_down_crossing = false;
    return flags;
}

/// (S - mu_t(arm))_+
inline double round_regret(const MeanSchedule& schedule, double threshold, Time t, Arm arm) {
    return std::max(0.0, threshold - schedule.mean(t, arm));
}

/// Sum over t of (S - mu_t(a_t))_+, computed from means rather than realized rewards.
inline double satisficing_regret(const MeanSchedule& schedule, double threshold, std::span<const Arm> actions) {
    if (actions.size() != schedule.horizon())
        throw ContractError("satisficing_regret: action sequence length must equal T");
    double total = 0.0;
    for (std::size_t seg = 0; seg < schedule.num_segments(); ++seg) {
        const auto mu = schedule.segment_means(seg);
        for (Time t = schedule.segment_start(seg); t <= schedule.segment_end(seg); ++t) {
            const Arm a = actions[t - 1];
            if (a >= schedule.num_arms()) throw std::out_of_range("arm index out of range");
            total += std::max(0.0, threshold - mu[a]);
        }
    }
    return total;
}

/// Number of rounds whose pulled arm has mean strictly below the threshold.
inline std::size_t wrong_pulls(const MeanSchedule& schedule, double threshold, std::span<const Arm> actions,
                               Time first = 1, Time last = 0) {
    if (last == 0) last = schedule.horizon();
    std::size_t count = 0;
    for (Time t = first; t <= last; ++t)
        if (schedule.mean(t, actions[t - 1]) < threshold) ++count;
    return count;
}

} // namespace satbandit
