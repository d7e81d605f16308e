#pragma once
/*
Experiment orchestration: configuration, seeded replication, CSV output.

Seeds per replication (see rng.hpp for derive_seed):
    instance sampling   derive_seed(master, "instance/g<grid index>", rep)
    observation noise   derive_seed(master, "noise/g<grid index>", rep)
    policy randomness   derive_seed(master, "policy/g<grid index>/<policy id>", rep)
    estimator coins     derive_seed(master, "coin/g<grid index>/<policy id>", rep)
All policies at a grid point see the same instance and the same noise stream.

Records come back ordered by (grid point, policy, replication) whatever the
thread count, so output bytes depend only on (config, master seed).
*/

#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "json.hpp"
#include "satbandit/env.hpp"
#include "satbandit/errors.hpp"
#include "satbandit/estimators.hpp"
#include "satbandit/hard_instances.hpp"
#include "satbandit/info_bounds.hpp"
#include "satbandit/policies.hpp"
#include "satbandit/rng.hpp"
#include "satbandit/schedule_io.hpp"

namespace satbandit {

// ---------------------------------------------------------------------------
// Configuration

enum class ExperimentKind { simulate, scaling, lowerbound, estimators, selfcheck };

inline ExperimentKind parse_kind(std::string_view s) {
    if (s == "simulate") return ExperimentKind::simulate;
    if (s == "scaling") return ExperimentKind::scaling;
    if (s == "lowerbound") return ExperimentKind::lowerbound;
    if (s == "estimators") return ExperimentKind::estimators;
    if (s == "selfcheck") return ExperimentKind::selfcheck;
    throw ParameterError("unknown experiment kind '" + std::string(s) + "'");
}

struct GridPoint {
    Time horizon = 0;
    std::size_t segments = 0;
    double gap = 0.0;
    double threshold = 0.0;
};

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::simulate;
    std::string experiment_id = "default";
    /// swap-window | single-switch | alternating | step-up | schedule
    std::string family = "alternating";
    std::optional<ScheduleDoc> schedule;  // used when family == "schedule"
    std::vector<std::string> policies{"nonstat-sat"};
    std::vector<Time> horizons{4096};
    std::vector<std::size_t> segments{2};
    std::vector<double> gaps{0.3};
    std::vector<double> thresholds{0.5};
    std::size_t replications = 1;
    std::uint64_t master_seed = 0;
    std::size_t threads = 0;  // 0: hardware concurrency
    bool record_timing = false;
    std::string out;

    /// Cartesian product, T outermost, then L, delta, S.
    std::vector<GridPoint> grid() const {
        if (family == "schedule") {
            if (!schedule) throw ParameterError("family 'schedule' needs a schedule document");
            return {{schedule->schedule.horizon(), schedule->schedule.num_segments(), 0.0, schedule->threshold}};
        }
        std::vector<GridPoint> out;
        for (Time t : horizons)
            for (std::size_t l : segments)
                for (double d : gaps)
                    for (double s : thresholds) out.push_back({t, l, d, s});
        return out;
    }
};

namespace detail {

inline std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        const std::size_t end = std::min(s.find(sep, start), s.size());
        std::string item(s.substr(start, end - start));
        const auto b = item.find_first_not_of(" \t");
        const auto e = item.find_last_not_of(" \t");
        if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
        start = end + 1;
    }
    return out;
}

template <class T>
T parse_number(const std::string& s) {
    T value{};
    const auto* end = s.data() + s.size();
    const auto res = std::from_chars(s.data(), end, value);
    if (res.ec != std::errc{} || res.ptr != end) throw ParameterError("cannot parse number '" + s + "'");
    return value;
}

template <class T>
std::vector<T> json_list(const nlohmann::json& j) {
    if (j.is_array()) return j.get<std::vector<T>>();
    return {j.get<T>()};
}

}  // namespace detail

/// Applies "T=4096,16384;L=1,2;delta=0.3;S=0.5". Keys not mentioned keep their values.
inline void apply_grid_string(ExperimentConfig& cfg, std::string_view grid) {
    for (const auto& part : detail::split(grid, ';')) {
        const auto eq = part.find('=');
        if (eq == std::string::npos) throw ParameterError("grid entry '" + part + "' lacks '='");
        const std::string key = part.substr(0, eq);
        const auto values = detail::split(std::string_view(part).substr(eq + 1), ',');
        if (values.empty()) throw ParameterError("grid entry '" + key + "' has no values");
        if (key == "T") {
            cfg.horizons.clear();
            for (const auto& v : values) cfg.horizons.push_back(detail::parse_number<Time>(v));
        } else if (key == "L") {
            cfg.segments.clear();
            for (const auto& v : values) cfg.segments.push_back(detail::parse_number<std::size_t>(v));
        } else if (key == "delta") {
            cfg.gaps.clear();
            for (const auto& v : values) cfg.gaps.push_back(detail::parse_number<double>(v));
        } else if (key == "S") {
            cfg.thresholds.clear();
            for (const auto& v : values) cfg.thresholds.push_back(detail::parse_number<double>(v));
        } else {
            throw ParameterError("unknown grid key '" + key + "'");
        }
    }
}

inline std::vector<std::string> parse_policy_list(std::string_view s) { return detail::split(s, ','); }

/*
Config document (JSON):
{
  "experiment_id": "scaling",
  "kind": "scaling",
  "instance": {"family": "alternating"}         // or {"schedule_file": "path"}
                                                 // or {"schedule": {...schedule document...}}
  "policies": ["nonstat-sat", "simple-sat"],
  "grid": {"T": [4096, 16384], "L": [1, 2], "delta": 0.3, "S": 0.5},
  "replications": 200,
  "seed": 7,
  "threads": 0,
  "record_timing": false,
  "out": "records.csv"
}
Every key is optional.
*/
inline ExperimentConfig config_from_json(const nlohmann::json& j, ExperimentConfig cfg = {}) {
    try {
        if (j.contains("experiment_id")) cfg.experiment_id = j["experiment_id"].get<std::string>();
        if (j.contains("kind")) cfg.kind = parse_kind(j["kind"].get<std::string>());
        if (j.contains("instance")) {
            const auto& inst = j["instance"];
            if (inst.contains("family")) cfg.family = inst["family"].get<std::string>();
            if (inst.contains("schedule_file")) {
                cfg.schedule = load_schedule(inst["schedule_file"].get<std::string>());
                cfg.family = "schedule";
            }
            if (inst.contains("schedule")) {
                cfg.schedule = schedule_from_json(inst["schedule"]);
                cfg.family = "schedule";
            }
        }
        if (j.contains("policies")) cfg.policies = j["policies"].get<std::vector<std::string>>();
        if (j.contains("grid")) {
            const auto& g = j["grid"];
            if (g.contains("T")) cfg.horizons = detail::json_list<Time>(g["T"]);
            if (g.contains("L")) cfg.segments = detail::json_list<std::size_t>(g["L"]);
            if (g.contains("delta")) cfg.gaps = detail::json_list<double>(g["delta"]);
            if (g.contains("S")) cfg.thresholds = detail::json_list<double>(g["S"]);
        }
        if (j.contains("replications")) cfg.replications = j["replications"].get<std::size_t>();
        if (j.contains("seed")) cfg.master_seed = j["seed"].get<std::uint64_t>();
        if (j.contains("threads")) cfg.threads = j["threads"].get<std::size_t>();
        if (j.contains("record_timing")) cfg.record_timing = j["record_timing"].get<bool>();
        if (j.contains("out")) cfg.out = j["out"].get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw ParameterError(std::string("config: ") + e.what());
    }
    return cfg;
}

inline ExperimentConfig load_config(const std::string& path, ExperimentConfig base = {}) {
    std::ifstream in(path);
    if (!in) throw ParameterError("cannot open config file " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParameterError("config file " + path + ": " + e.what());
    }
    return config_from_json(j, std::move(base));
}

inline void validate_config(const ExperimentConfig& cfg) {
    if (cfg.replications < 1) throw ParameterError("replications must be >= 1");
    if (cfg.policies.empty()) throw ParameterError("no policies configured");
    static const std::vector<std::string> known{"swap-window", "single-switch", "alternating", "step-up", "schedule"};
    if (std::find(known.begin(), known.end(), cfg.family) == known.end())
        throw ParameterError("unknown family '" + cfg.family + "'");
    if (cfg.family == "schedule" && !cfg.schedule) throw ParameterError("family 'schedule' needs a schedule");
}

// ---------------------------------------------------------------------------
// Instances and policies

inline bool is_hard_family(std::string_view family) {
    return family == "swap-window" || family == "single-switch";
}

/// Everything needed to build instances for one grid point.
class InstanceFactory {
public:
    /// Throws ParameterError when the grid point is infeasible for the family.
    InstanceFactory(const ExperimentConfig& cfg, const GridPoint& gp) : family_(cfg.family), point_(gp) {
        if (family_ == "swap-window") {
            params_ = swap_window_params(gp.horizon, gp.segments, gp.gap, gp.threshold);
        } else if (family_ == "single-switch") {
            params_ = single_switch_params(gp.horizon, gp.segments, gp.gap, gp.threshold);
        } else if (family_ == "alternating") {
            fixed_.emplace(alternating_instance(gp.horizon, gp.segments, gp.gap, gp.threshold), gp.threshold);
        } else if (family_ == "step-up") {
            fixed_.emplace(step_up_instance(gp.horizon), gp.threshold);
        } else {
            fixed_.emplace(cfg.schedule->schedule, cfg.schedule->threshold);
        }
    }

    /// Three arms: 0.8 throughout; 0.2 stepping up to 0.7 at T/2; 0.3 throughout.
    static MeanSchedule step_up_instance(Time horizon) {
        if (horizon < 2) throw ParameterError("step-up: need T >= 2");
        return MeanSchedule(3, horizon, {1, horizon / 2 + 1, horizon + 1}, {{0.8, 0.2, 0.3}, {0.8, 0.7, 0.3}});
    }

    const std::optional<InstanceParams>& params() const noexcept { return params_; }
    const GridPoint& point() const noexcept { return point_; }
    const std::string& family() const noexcept { return family_; }

    /// Reported gap: the family's delta, or nothing for fixed schedules without one.
    std::optional<double> gap() const {
        if (params_ || family_ == "alternating") return point_.gap;
        return std::nullopt;
    }

    /// Builds the environment; hard families draw nu from `instance_rng`.
    Environment build(RandomStream& instance_rng, NuVector* nu_out = nullptr) const {
        if (params_) {
            NuVector nu = sample_nu(*params_, instance_rng);
            Environment env = hard_environment(*params_, nu);
            if (nu_out) *nu_out = std::move(nu);
            return env;
        }
        return Environment(fixed_->schedule, fixed_->threshold);
    }

private:
    std::string family_;
    GridPoint point_;
    std::optional<InstanceParams> params_;
    std::optional<ScheduleDoc> fixed_;
};

struct PolicyContext {
    const Environment* env = nullptr;
    const InstanceParams* params = nullptr;
    std::uint64_t seed = 0;
};

/// Policy ids: nonstat-sat, simple-sat, oracle-restart, fixed:<arm>, round-robin,
/// uniform, and on hard families forced:prime, forced:double-prime.
inline std::unique_ptr<Policy> make_policy(const std::string& id, const PolicyContext& ctx) {
    const Environment& env = *ctx.env;
    const std::size_t k = env.num_arms();
    if (id == "nonstat-sat") return std::make_unique<NonstationarySat>(k, env.horizon(), env.threshold);
    if (id == "simple-sat") return std::make_unique<SimpleSat>(k, env.threshold, ctx.seed);
    if (id == "oracle-restart") {
        const auto cps = env.schedule.change_points();
        return std::make_unique<OracleRestart>(k, env.threshold, std::vector<Time>(cps.begin(), cps.end()),
                                               ctx.seed);
    }
    if (id == "round-robin") return std::make_unique<RoundRobin>(k);
    if (id == "uniform") return std::make_unique<UniformRandom>(k, ctx.seed);
    if (id.rfind("fixed:", 0) == 0) {
        std::size_t arm = 0;
        try {
            arm = detail::parse_number<std::size_t>(id.substr(6));
        } catch (const ParameterError&) {
            throw ParameterError("policy '" + id + "': arm index must be a non-negative integer");
        }
        if (arm >= k) throw ParameterError("policy '" + id + "': arm index must be below K=" + std::to_string(k));
        return std::make_unique<FixedArm>(arm);
    }
    if (id == "forced:prime" || id == "forced:double-prime") {
        if (!ctx.params || ctx.params->family != Family::single_switch)
            throw ParameterError("policy '" + id + "' needs the single-switch family");
        return std::make_unique<WindowSamplingPolicy>(id == "forced:prime"
                                                          ? WindowSamplingPolicy::for_prime(*ctx.params)
                                                          : WindowSamplingPolicy::for_double_prime(*ctx.params));
    }
    throw ParameterError("unknown policy id '" + id + "'");
}

// ---------------------------------------------------------------------------
// Parallel replication

/// Evaluates fn(0..n-1) on a worker pool; results are indexed by task, so the
/// output does not depend on the thread count. The first exception is rethrown.
template <class Fn>
auto parallel_map(std::size_t n, std::size_t threads, Fn&& fn) -> std::vector<decltype(fn(std::size_t{}))> {
    using R = decltype(fn(std::size_t{}));
    std::vector<std::optional<R>> slots(n);
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min(threads, std::max<std::size_t>(n, 1));

    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < n && !failed; i = next++) {
            try {
                slots[i].emplace(fn(i));
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                failed = true;
            }
        }
    };
    {
        std::vector<std::jthread> pool;
        for (std::size_t w = 1; w < threads; ++w) pool.emplace_back(worker);
        worker();
    }
    if (error) std::rethrow_exception(error);
    std::vector<R> out;
    out.reserve(n);
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

// ---------------------------------------------------------------------------
// Records

struct RegretRecord {
    std::string experiment_id;
    std::string policy;
    std::string family;
    Time horizon = 0;
    std::size_t segments = 0;
    std::size_t num_arms = 0;
    std::optional<double> gap;
    double threshold = 0.0;
    std::size_t replication = 0;
    std::uint64_t seed = 0;
    double regret = 0.0;
    std::size_t wrong_pulls = 0;
    double runtime_ms = 0.0;
};

inline std::string grid_label(std::string_view stream, std::size_t grid_index) {
    return std::string(stream) + "/g" + std::to_string(grid_index);
}

struct PreparedPoint {
    std::size_t grid_index;
    InstanceFactory factory;
};

/// Builds factories for every feasible grid point; infeasible points are logged and skipped.
inline std::vector<PreparedPoint> prepare_grid(const ExperimentConfig& cfg, std::ostream& log) {
    validate_config(cfg);
    std::vector<PreparedPoint> out;
    const auto grid = cfg.grid();
    for (std::size_t g = 0; g < grid.size(); ++g) {
        try {
            out.push_back({g, InstanceFactory(cfg, grid[g])});
        } catch (const ParameterError& e) {
            log << "skipping grid point T=" << grid[g].horizon << " L=" << grid[g].segments
                << " delta=" << grid[g].gap << " S=" << grid[g].threshold << ": " << e.what() << '\n';
        }
    }
    if (out.empty()) throw ParameterError("no feasible grid point");
    // Reject bad policy ids before any work starts.
    RandomStream probe(0);
    const Environment env = out.front().factory.build(probe);
    for (const auto& id : cfg.policies) {
        const auto& params = out.front().factory.params();
        make_policy(id, {&env, params ? &*params : nullptr, 0});
    }
    return out;
}

inline std::vector<RegretRecord> run_experiment(const ExperimentConfig& cfg, std::ostream& log = std::cerr) {
    const auto points = prepare_grid(cfg, log);
    const std::size_t per_point = cfg.policies.size() * cfg.replications;
    const std::size_t total = points.size() * per_point;
    log << "running " << total << " episodes on " << points.size() << " grid point(s)\n";

    return parallel_map(total, cfg.threads, [&](std::size_t task) {
        const auto& point = points[task / per_point];
        const std::size_t policy_index = (task % per_point) / cfg.replications;
        const std::size_t rep = task % cfg.replications;
        const std::string& pid = cfg.policies[policy_index];
        const auto start = std::chrono::steady_clock::now();

        RandomStream instance_rng(derive_seed(cfg.master_seed, grid_label("instance", point.grid_index), rep));
        const std::uint64_t noise_seed = derive_seed(cfg.master_seed, grid_label("noise", point.grid_index), rep);
        RandomStream noise(noise_seed);
        const Environment env = point.factory.build(instance_rng);
        const auto& params = point.factory.params();
        auto policy = make_policy(
            pid, {&env, params ? &*params : nullptr,
                  derive_seed(cfg.master_seed, grid_label("policy", point.grid_index) + "/" + pid, rep)});
        const EpisodeResult res = run_episode(env, *policy, noise);

        RegretRecord rec;
        rec.experiment_id = cfg.experiment_id;
        rec.policy = pid;
        rec.family = point.factory.family();
        rec.horizon = env.horizon();
        rec.segments = env.schedule.num_segments();
        rec.num_arms = env.num_arms();
        rec.gap = point.factory.gap();
        rec.threshold = env.threshold;
        rec.replication = rep;
        rec.seed = noise_seed;
        rec.regret = res.regret;
        rec.wrong_pulls = res.wrong_pulls;
        if (cfg.record_timing)
            rec.runtime_ms =
                std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        return rec;
    });
}

/// On two-level families every wrong pull costs exactly delta.
inline bool regret_matches_wrong_pulls(const RegretRecord& r) {
    if (!r.gap) return true;
    const double expected = *r.gap * static_cast<double>(r.wrong_pulls);
    return std::abs(r.regret - expected) <= 1e-9 * std::max(1.0, expected);
}

// ---------------------------------------------------------------------------
// CSV

/// Shortest round-trip representation; locale independent.
inline std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

inline std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

inline constexpr std::string_view kRecordHeader =
    "experiment_id,policy,family,T,L,K,delta,S,replication,seed,regret,wrong_pulls,runtime_ms";

inline void write_records_csv(std::ostream& os, const std::vector<RegretRecord>& records) {
    os << kRecordHeader << '\n';
    for (const auto& r : records) {
        os << csv_field(r.experiment_id) << ',' << csv_field(r.policy) << ',' << r.family << ',' << r.horizon << ','
           << r.segments << ',' << r.num_arms << ',' << (r.gap ? format_double(*r.gap) : "") << ','
           << format_double(r.threshold) << ',' << r.replication << ',' << r.seed << ','
           << format_double(r.regret) << ',' << r.wrong_pulls << ',' << format_double(r.runtime_ms) << '\n';
    }
}

inline std::string records_csv(const std::vector<RegretRecord>& records) {
    std::ostringstream os;
    write_records_csv(os, records);
    return os.str();
}

} // namespace satbandit
