#pragma once
// Policies for nonstationary satisficing bandits and the episode runner.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "satbandit/env.hpp"
#include "satbandit/errors.hpp"
#include "satbandit/rng.hpp"
#include "satbandit/windowed_stats.hpp"

namespace satbandit {

/// select(t) and update(t, arm, reward) alternate for t = 1, 2, ...; reset()
/// restores the initial state, including any internal random stream.
class Policy {
public:
    virtual ~Policy() = default;
    virtual Arm select(Time t) = 0;
    virtual void update(Time t, Arm arm, double reward) = 0;
    virtual void reset() = 0;
    virtual std::string id() const = 0;
};

/// Explore round-robin until an arm's windowed LCB reaches S, then exploit it
/// until its windowed UCB drops below S. Promotion and demotion both start a
/// new epoch (fresh buffer) for that arm.
class NonstationarySat final : public Policy {
public:
    NonstationarySat(std::size_t num_arms, Time horizon, double threshold)
        : NonstationarySat(num_arms, threshold, RadiusFn(horizon, num_arms)) {}

    NonstationarySat(std::size_t num_arms, double threshold, RadiusFn radius)
        : num_arms_(num_arms), threshold_(threshold), radius_(std::move(radius)) {
        if (num_arms_ == 0) throw ParameterError("nonstat-sat: K must be positive");
        reset();
    }

    Arm select(Time t) override {
        if (t != next_round_ || pending_)
            throw ContractError("nonstat-sat: select called out of order at t=" + std::to_string(t));
        pending_ = true;
        if (leader_) {
            selected_ = *leader_;
        } else {
            selected_ = pointer_;
            pointer_ = (pointer_ + 1) % num_arms_;
            ++exploration_rounds_;
        }
        return selected_;
    }

    void update(Time t, Arm arm, double reward) override {
        if (!pending_ || t != next_round_ || arm != selected_)
            throw ContractError("nonstat-sat: update does not match the pending selection");
        pending_ = false;
        ++next_round_;
        EpochBuffer& buf = buffers_[arm];
        buf.append(reward);
        if (!leader_) {
            if (lcb_win(buf, radius_) >= threshold_) {
                leader_ = arm;
                new_epoch(arm);
                ++promotions_;
            }
        } else if (ucb_win(buf, radius_) < threshold_) {
            leader_.reset();
            new_epoch(arm);
            ++demotions_;
        }
    }

    void reset() override {
        leader_.reset();
        pointer_ = 0;
        epochs_.assign(num_arms_, 1);
        buffers_.assign(num_arms_, EpochBuffer{});
        next_round_ = 1;
        pending_ = false;
        exploration_rounds_ = promotions_ = demotions_ = 0;
    }

    std::string id() const override { return "nonstat-sat"; }

    std::optional<Arm> leader() const noexcept { return leader_; }
    std::size_t epoch(Arm a) const { return epochs_.at(a); }
    const EpochBuffer& buffer(Arm a) const { return buffers_.at(a); }
    std::size_t exploration_rounds() const noexcept { return exploration_rounds_; }
    std::size_t promotions() const noexcept { return promotions_; }
    std::size_t demotions() const noexcept { return demotions_; }

private:
    void new_epoch(Arm a) {
        ++epochs_[a];
        buffers_[a].reset();
    }

    std::size_t num_arms_;
    double threshold_;
    RadiusFn radius_;

    std::optional<Arm> leader_;
    Arm pointer_ = 0;  // persists across leader periods; advances on exploration pulls only
    std::vector<std::size_t> epochs_;
    std::vector<EpochBuffer> buffers_;
    Time next_round_ = 1;
    bool pending_ = false;
    Arm selected_ = 0;

    std::size_t exploration_rounds_ = 0;
    std::size_t promotions_ = 0;
    std::size_t demotions_ = 0;
};

/// Pull each arm once, then play the empirical argmax if it clears S, else a
/// uniformly random arm. Ties go to the lowest index.
class SimpleSat final : public Policy {
public:
    SimpleSat(std::size_t num_arms, double threshold, std::uint64_t seed)
        : num_arms_(num_arms), threshold_(threshold), rng_(seed) {
        if (num_arms_ == 0) throw ParameterError("simple-sat: K must be positive");
        reset();
    }

    Arm select(Time) override {
        if (local_round_ < num_arms_) return local_round_;
        Arm best = 0;
        for (Arm a = 1; a < num_arms_; ++a)
            if (means_[a] > means_[best]) best = a;
        if (counts_[best] > 0 && means_[best] >= threshold_) return best;
        return rng_.uniform_index(num_arms_);
    }

    void update(Time, Arm arm, double reward) override {
        ++local_round_;
        ++counts_[arm];
        means_[arm] += (reward - means_[arm]) / static_cast<double>(counts_[arm]);
    }

    /// Forget all statistics and restart the initial sweep; the random stream continues.
    void restart() {
        counts_.assign(num_arms_, 0);
        means_.assign(num_arms_, 0.0);
        local_round_ = 0;
    }

    void reset() override {
        restart();
        rng_.reseed();
    }

    std::string id() const override { return "simple-sat"; }

    double empirical_mean(Arm a) const { return means_.at(a); }
    std::size_t pulls(Arm a) const { return counts_.at(a); }

private:
    std::size_t num_arms_;
    double threshold_;
    RandomStream rng_;
    std::vector<std::size_t> counts_;
    std::vector<double> means_;
    std::size_t local_round_ = 0;
};

/// Simple-Sat restarted at every true change point (oracle knowledge).
class OracleRestart final : public Policy {
public:
    OracleRestart(std::size_t num_arms, double threshold, std::vector<Time> change_points, std::uint64_t seed)
        : inner_(num_arms, threshold, seed), change_points_(std::move(change_points)) {
        reset();
    }

    Arm select(Time t) override {
        while (next_change_ < change_points_.size() && change_points_[next_change_] <= t) {
            if (change_points_[next_change_] == t) inner_.restart();
            ++next_change_;
        }
        return inner_.select(t);
    }

    void update(Time t, Arm arm, double reward) override { inner_.update(t, arm, reward); }

    void reset() override {
        inner_.reset();
        next_change_ = 1;  // T_0 = 1 is the initial state
    }

    std::string id() const override { return "oracle-restart"; }

private:
    SimpleSat inner_;
    std::vector<Time> change_points_;
    std::size_t next_change_ = 1;
};

class FixedArm final : public Policy {
public:
    explicit FixedArm(Arm arm) : arm_(arm) {}
    Arm select(Time) override { return arm_; }
    void update(Time, Arm, double) override {}
    void reset() override {}
    std::string id() const override { return "fixed:" + std::to_string(arm_); }

private:
    Arm arm_;
};

/// a_t = (t - 1) mod K
class RoundRobin final : public Policy {
public:
    explicit RoundRobin(std::size_t num_arms) : num_arms_(num_arms) {
        if (num_arms_ == 0) throw ParameterError("round-robin: K must be positive");
    }
    Arm select(Time t) override { return (t - 1) % num_arms_; }
    void update(Time, Arm, double) override {}
    void reset() override {}
    std::string id() const override { return "round-robin"; }

private:
    std::size_t num_arms_;
};

class UniformRandom final : public Policy {
public:
    UniformRandom(std::size_t num_arms, std::uint64_t seed) : num_arms_(num_arms), rng_(seed) {
        if (num_arms_ == 0) throw ParameterError("uniform: K must be positive");
    }
    Arm select(Time) override { return rng_.uniform_index(num_arms_); }
    void update(Time, Arm, double) override {}
    void reset() override { rng_.reseed(); }
    std::string id() const override { return "uniform"; }

private:
    std::size_t num_arms_;
    RandomStream rng_;
};

struct EpisodeResult {
    Transcript transcript;
    double regret = 0.0;
    std::size_t wrong_pulls = 0;
};

/// Drives T rounds. The policy must be fresh or explicitly reset.
inline EpisodeResult run_episode(const Environment& env, Policy& policy, RandomStream& noise) {
    const Time horizon = env.horizon();
    const MeanSchedule& sched = env.schedule;
    EpisodeResult out;
    out.transcript.actions.reserve(horizon);
    out.transcript.rewards.reserve(horizon);
    if (env.blocks) out.transcript.wrong_pull_counts.emplace(env.blocks->num_blocks, 0);

    for (Time t = 1; t <= horizon; ++t) {
        const Arm a = policy.select(t);
        if (a >= env.num_arms()) throw ContractError("policy selected an arm outside [0, K)");
        const double r = sample_reward(env, t, a, noise);
        policy.update(t, a, r);
        out.transcript.actions.push_back(a);
        out.transcript.rewards.push_back(r);
        const double mu = sched.mean(t, a);
        if (mu < env.threshold) {
            out.regret += env.threshold - mu;
            ++out.wrong_pulls;
            if (env.blocks) ++(*out.transcript.wrong_pull_counts)[env.blocks->block_of(t)];
        }
    }
    return out;
}

} // namespace satbandit
