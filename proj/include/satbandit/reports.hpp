#pragma once
// Aggregated summaries over replication records.

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <tuple>
#include <vector>

#include "satbandit/harness.hpp"

namespace satbandit {

struct MeanStat {
    std::size_t count = 0;
    double mean = 0.0;
    double stderr_ = 0.0;
};

inline MeanStat mean_stat(const std::vector<double>& xs) {
    MeanStat s;
    s.count = xs.size();
    if (xs.empty()) return s;
    double sum = 0.0;
    for (double x : xs) sum += x;
    s.mean = sum / static_cast<double>(xs.size());
    if (xs.size() > 1) {
        double ss = 0.0;
        for (double x : xs) ss += (x - s.mean) * (x - s.mean);
        s.stderr_ = std::sqrt(ss / static_cast<double>(xs.size() - 1) / static_cast<double>(xs.size()));
    }
    return s;
}

/// Standard error of a Bernoulli rate estimate.
inline double binomial_stderr(double rate, std::size_t n) {
    return n == 0 ? 0.0 : std::sqrt(rate * (1.0 - rate) / static_cast<double>(n));
}

// ---------------------------------------------------------------------------
// Scaling

struct ScalingRow {
    std::string policy;
    std::string family;
    Time horizon = 0;
    std::size_t segments = 0;
    std::optional<double> gap;
    double threshold = 0.0;
    MeanStat regret;
    double normalized = 0.0;  // mean regret / (L ln T)
};

struct ScalingGroup {
    std::string policy;
    std::string family;
    std::optional<double> gap;
    double threshold = 0.0;
    double min_normalized = 0.0;
    double max_normalized = 0.0;
    /// max/min of the normalized statistic stays below this factor.
    static constexpr double kFlatFactor = 4.0;
    bool flat() const { return max_normalized < kFlatFactor * min_normalized; }
};

struct ScalingReport {
    std::vector<ScalingRow> rows;
    std::vector<ScalingGroup> groups;
};

inline ScalingReport scaling_report(const std::vector<RegretRecord>& records) {
    using Key = std::tuple<std::string, std::string, std::optional<double>, double, Time, std::size_t>;
    std::map<Key, std::vector<double>> buckets;
    std::map<Key, const RegretRecord*> exemplar;
    for (const auto& r : records) {
        Key k{r.policy, r.family, r.gap, r.threshold, r.horizon, r.segments};
        buckets[k].push_back(r.regret);
        exemplar.emplace(k, &r);
    }
    ScalingReport rep;
    for (const auto& [k, xs] : buckets) {
        const RegretRecord& ex = *exemplar.at(k);
        ScalingRow row{ex.policy, ex.family, ex.horizon, ex.segments, ex.gap, ex.threshold, mean_stat(xs), 0.0};
        row.normalized = row.regret.mean / (static_cast<double>(row.segments) *
                                            std::log(static_cast<double>(row.horizon)));
        rep.rows.push_back(row);
    }
    for (const auto& row : rep.rows) {
        auto it = std::find_if(rep.groups.begin(), rep.groups.end(), [&](const ScalingGroup& g) {
            return g.policy == row.policy && g.family == row.family && g.gap == row.gap &&
                   g.threshold == row.threshold;
        });
        if (it == rep.groups.end()) {
            rep.groups.push_back({row.policy, row.family, row.gap, row.threshold, row.normalized, row.normalized});
        } else {
            it->min_normalized = std::min(it->min_normalized, row.normalized);
            it->max_normalized = std::max(it->max_normalized, row.normalized);
        }
    }
    return rep;
}

inline void write_scaling_report(std::ostream& os, const ScalingReport& rep) {
    os << "policy,family,T,L,delta,S,replications,mean_regret,stderr,regret_over_L_lnT\n";
    for (const auto& r : rep.rows)
        os << r.policy << ',' << r.family << ',' << r.horizon << ',' << r.segments << ','
           << (r.gap ? format_double(*r.gap) : "") << ',' << format_double(r.threshold) << ',' << r.regret.count
           << ',' << format_double(r.regret.mean) << ',' << format_double(r.regret.stderr_) << ','
           << format_double(r.normalized) << '\n';
    os << "\npolicy,family,delta,S,min_normalized,max_normalized,ratio,flat\n";
    for (const auto& g : rep.groups)
        os << g.policy << ',' << g.family << ',' << (g.gap ? format_double(*g.gap) : "") << ','
           << format_double(g.threshold) << ',' << format_double(g.min_normalized) << ','
           << format_double(g.max_normalized) << ',' << format_double(g.max_normalized / g.min_normalized) << ','
           << (g.flat() ? "yes" : "NO") << '\n';
}

// ---------------------------------------------------------------------------
// Bayesian floor on swap-window instances: mean regret >= (L-1) ln n / 256.

struct LowerBoundRow {
    std::string policy;
    Time horizon = 0;
    std::size_t segments = 0;
    double gap = 0.0;
    double threshold = 0.0;
    std::size_t num_candidates = 0;
    MeanStat regret;
    double floor = 0.0;
    bool fano_margin = false;
    bool pass() const { return regret.mean >= floor - 3.0 * regret.stderr_; }
};

inline double swap_window_regret_floor(const InstanceParams& p) {
    return static_cast<double>(p.num_segments - 1) * std::log(static_cast<double>(p.num_candidates)) / 256.0;
}

inline std::vector<LowerBoundRow> lowerbound_report(const std::vector<RegretRecord>& records) {
    using Key = std::tuple<Time, std::size_t, double, double, std::string>;
    std::map<Key, std::vector<double>> buckets;
    std::vector<Key> order;
    for (const auto& r : records) {
        if (r.family != "swap-window" || !r.gap) continue;
        Key k{r.horizon, r.segments, *r.gap, r.threshold, r.policy};
        auto [it, inserted] = buckets.try_emplace(k);
        if (inserted) order.push_back(k);
        it->second.push_back(r.regret);
    }
    std::vector<LowerBoundRow> out;
    for (const auto& k : order) {
        const auto& [t, l, d, s, pid] = k;
        const InstanceParams p = swap_window_params(t, l, d, s);
        out.push_back({pid, t, l, d, s, p.num_candidates, mean_stat(buckets[k]), swap_window_regret_floor(p),
                       p.fano_margin_holds()});
    }
    return out;
}

inline void write_lowerbound_report(std::ostream& os, const std::vector<LowerBoundRow>& rows) {
    os << "policy,T,L,delta,S,n,replications,mean_regret,stderr,floor,fano_margin,pass\n";
    for (const auto& r : rows)
        os << r.policy << ',' << r.horizon << ',' << r.segments << ',' << format_double(r.gap) << ','
           << format_double(r.threshold) << ',' << r.num_candidates << ',' << r.regret.count << ','
           << format_double(r.regret.mean) << ',' << format_double(r.regret.stderr_) << ','
           << format_double(r.floor) << ',' << (r.fano_margin ? "yes" : "no") << ',' << (r.pass() ? "yes" : "NO")
           << '\n';
}

// ---------------------------------------------------------------------------
// Estimator verification

/// One Monte-Carlo quantity compared against an analytic bound.
struct EstimatorRow {
    std::string family;
    Time horizon = 0;
    std::size_t segments = 0;
    double gap = 0.0;
    std::string policy;
    std::string metric;
    std::size_t samples = 0;
    double value = 0.0;
    double stderr_ = 0.0;
    double bound = 0.0;
    bool upper = true;  // value <= bound (+3 se) if true, value >= bound (-3 se) otherwise
    bool pass() const { return upper ? value <= bound + 3.0 * stderr_ : value >= bound - 3.0 * stderr_; }
};

namespace detail {

struct BlockOutcome {
    // swap-window
    bool argmax_correct = false;
    bool qualifies = false;  // M_l <= l/4
    // single-switch
    bool prime_correct = false;
    bool double_prime_correct = false;
    bool mixed_correct = false;
    bool enough_arm0 = false;  // N_{l,nu} >= r
    double info_budget = 0.0;
};

inline std::vector<BlockOutcome> evaluate_blocks(const InstanceParams& p, const NuVector& nu,
                                                 const EpisodeResult& res, RandomStream& coins) {
    std::vector<BlockOutcome> out(p.num_blocks);
    for (std::size_t b = 0; b < p.num_blocks; ++b) {
        const BlockView v = BlockView::slice(res.transcript, p, b);
        BlockOutcome& o = out[b];
        if (p.family == Family::swap_window) {
            o.argmax_correct = argmax_nu_estimator(v) == nu[b];
            o.qualifies = 4 * (*res.transcript.wrong_pull_counts)[b] <= p.window_length;
        } else {
            const bool coin = coins.coin();
            o.prime_correct = changepoint_estimator_prime(v) == nu[b];
            o.double_prime_correct = changepoint_estimator_double_prime(v) == nu[b];
            o.mixed_correct = coin ? o.double_prime_correct : o.prime_correct;
            o.enough_arm0 = detail::summarize_window(v, nu[b], kOffWindowArm, 0).pulls >= p.split;
            o.info_budget = info_budget(v, nu[b], p.gap);
        }
    }
    return out;
}

}  // namespace detail

inline std::vector<EstimatorRow> estimator_report(const ExperimentConfig& cfg, std::ostream& log = std::cerr) {
    if (!is_hard_family(cfg.family)) throw ParameterError("estimators need the swap-window or single-switch family");
    const auto points = prepare_grid(cfg, log);
    std::vector<EstimatorRow> rows;
    for (const auto& point : points) {
        const InstanceParams& p = *point.factory.params();
        for (const auto& pid : cfg.policies) {
            auto per_rep = parallel_map(cfg.replications, cfg.threads, [&](std::size_t rep) {
                RandomStream instance_rng(derive_seed(cfg.master_seed, grid_label("instance", point.grid_index), rep));
                RandomStream noise(derive_seed(cfg.master_seed, grid_label("noise", point.grid_index), rep));
                RandomStream coins(
                    derive_seed(cfg.master_seed, grid_label("coin", point.grid_index) + "/" + pid, rep));
                NuVector nu;
                const Environment env = point.factory.build(instance_rng, &nu);
                auto policy = make_policy(
                    pid, {&env, &p, derive_seed(cfg.master_seed, grid_label("policy", point.grid_index) + "/" + pid, rep)});
                const EpisodeResult res = run_episode(env, *policy, noise);
                return detail::evaluate_blocks(p, nu, res, coins);
            });

            std::vector<detail::BlockOutcome> blocks;
            for (auto& v : per_rep) blocks.insert(blocks.end(), v.begin(), v.end());
            const std::size_t n_blocks = blocks.size();
            auto rate = [&](auto pred) {
                std::size_t c = 0;
                for (const auto& o : blocks) c += pred(o) ? 1 : 0;
                return static_cast<double>(c) / static_cast<double>(n_blocks);
            };
            EstimatorRow base{family_name(p.family), p.horizon, p.num_segments, p.gap, pid, "", n_blocks};
            auto push_rate = [&](std::string metric, double value, double bound, bool upper) {
                EstimatorRow row = base;
                row.metric = std::move(metric);
                row.value = value;
                row.stderr_ = binomial_stderr(value, n_blocks);
                row.bound = bound;
                row.upper = upper;
                rows.push_back(row);
            };
            const double n = static_cast<double>(p.num_candidates);
            const double d2 = p.gap * p.gap;
            if (p.family == Family::swap_window) {
                const double err = rate([](const auto& o) { return !o.argmax_correct; });
                push_rate("argmax_error", err, conditional_fano_rhs(swap_family_average_kl(p), p.num_candidates),
                          false);
                std::size_t qualifying = 0, violations = 0;
                for (const auto& o : blocks) {
                    qualifying += o.qualifies;
                    violations += o.qualifies && !o.argmax_correct;
                }
                EstimatorRow row = base;
                row.metric = "implication_violations";
                row.samples = qualifying;
                row.value = static_cast<double>(violations);
                row.bound = 0.0;
                rows.push_back(row);
            } else {
                const double r = static_cast<double>(p.split);
                const double l = static_cast<double>(p.window_length);
                const double short_rate = rate([](const auto& o) { return !o.enough_arm0; });
                push_rate("prime_error", rate([](const auto& o) { return !o.prime_correct; }),
                          short_rate + n * std::exp(-r * d2 / 2.0), true);
                push_rate("double_prime_error", rate([](const auto& o) { return !o.double_prime_correct; }),
                          (1.0 - short_rate) + n * std::exp(-(l - r) * d2 / 2.0), true);
                push_rate("mixed_error", rate([](const auto& o) { return !o.mixed_correct; }), 0.75, true);
                std::vector<double> budgets;
                for (const auto& o : blocks) budgets.push_back(o.info_budget);
                const MeanStat ib = mean_stat(budgets);
                EstimatorRow row = base;
                row.metric = "info_budget";
                row.value = ib.mean;
                row.stderr_ = ib.stderr_;
                row.bound = 0.25 * std::log(n) - std::log(2.0);
                row.upper = false;
                rows.push_back(row);
            }
        }
    }
    return rows;
}

inline void write_estimator_report(std::ostream& os, const std::vector<EstimatorRow>& rows) {
    os << "family,T,L,delta,policy,metric,samples,value,stderr,relation,bound,pass\n";
    for (const auto& r : rows)
        os << r.family << ',' << r.horizon << ',' << r.segments << ',' << format_double(r.gap) << ',' << r.policy
           << ',' << r.metric << ',' << r.samples << ',' << format_double(r.value) << ','
           << format_double(r.stderr_) << ',' << (r.upper ? "<=" : ">=") << ',' << format_double(r.bound) << ','
           << (r.pass() ? "yes" : "NO") << '\n';
}

} // namespace satbandit
