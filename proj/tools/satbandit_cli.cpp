// satbandit: command-line driver for the simulation harness.
//
//   satbandit simulate   --config run.json --out records.csv
//   satbandit scaling    --family alternating --policies nonstat-sat --grid "T=4096,16384;L=1,2,4"
//   satbandit lowerbound --grid "T=3000;L=3;delta=0.5;S=0.5" --replications 2000
//   satbandit estimators --family single-switch --policies forced:prime,uniform
//   satbandit selfcheck
//
// Exit codes: 0 success, 2 parameter error, 3 selfcheck failure.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "satbandit/harness.hpp"
#include "satbandit/reports.hpp"
#include "satbandit/schedule_io.hpp"
#include "satbandit/selfcheck.hpp"

namespace {

using namespace satbandit;

constexpr int kExitParameterError = 2;
constexpr int kExitSelfcheckFailed = 3;

struct Flags {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::optional<std::size_t> replications;
    std::string policies;
    std::string family;
    std::string schedule;
    std::string grid;
    std::optional<std::size_t> threads;
    bool timing = false;
};

void add_common_flags(CLI::App* cmd, Flags& f) {
    cmd->add_option("--config", f.config, "JSON experiment config");
    cmd->add_option("--seed", f.seed, "master seed (u64)");
    cmd->add_option("--out", f.out, "record CSV path (default: stdout for simulate)");
    cmd->add_option("--replications", f.replications, "replications per grid point and policy");
    cmd->add_option("--policies", f.policies, "comma-separated policy ids");
    cmd->add_option("--family", f.family, "swap-window|single-switch|alternating|step-up");
    cmd->add_option("--schedule", f.schedule, "explicit schedule JSON (sets family=schedule)");
    cmd->add_option("--grid", f.grid, "\"T=...;L=...;delta=...;S=...\"");
    cmd->add_option("--threads", f.threads, "worker threads (0: all cores)");
    cmd->add_flag("--timing", f.timing, "fill runtime_ms (output is then not reproducible)");
}

ExperimentConfig build_config(const Flags& f, ExperimentKind kind, ExperimentConfig defaults) {
    defaults.kind = kind;
    ExperimentConfig cfg = f.config.empty() ? defaults : load_config(f.config, defaults);
    cfg.kind = kind;
    if (f.seed) cfg.master_seed = *f.seed;
    if (!f.out.empty()) cfg.out = f.out;
    if (f.replications) cfg.replications = *f.replications;
    if (!f.policies.empty()) cfg.policies = parse_policy_list(f.policies);
    if (!f.family.empty()) cfg.family = f.family;
    if (!f.schedule.empty()) {
        cfg.schedule = load_schedule(f.schedule);
        cfg.family = "schedule";
    }
    if (!f.grid.empty()) apply_grid_string(cfg, f.grid);
    if (f.threads) cfg.threads = *f.threads;
    if (f.timing) cfg.record_timing = true;
    validate_config(cfg);
    return cfg;
}

void emit_records(const ExperimentConfig& cfg, const std::vector<RegretRecord>& records) {
    for (const auto& r : records)
        if (!regret_matches_wrong_pulls(r))
            std::cerr << "warning: record " << r.policy << " rep " << r.replication
                      << " breaks regret = delta * wrong_pulls\n";
    if (cfg.out.empty()) {
        write_records_csv(std::cout, records);
        return;
    }
    std::ofstream os(cfg.out, std::ios::binary);
    if (!os) throw ParameterError("cannot write " + cfg.out);
    write_records_csv(os, records);
    std::cerr << "wrote " << records.size() << " records to " << cfg.out << '\n';
}

/// Summary tables go to stdout; with no --out the records are not printed.
void emit_records_to_file(const ExperimentConfig& cfg, const std::vector<RegretRecord>& records) {
    if (!cfg.out.empty()) emit_records(cfg, records);
}

ExperimentConfig lowerbound_defaults() {
    ExperimentConfig c;
    c.experiment_id = "lowerbound";
    c.family = "swap-window";
    c.policies = {"nonstat-sat", "simple-sat", "oracle-restart", "round-robin", "uniform", "fixed:0", "fixed:1"};
    c.horizons = {3000};
    c.segments = {3};
    c.gaps = {0.5};
    c.replications = 2000;
    return c;
}

ExperimentConfig estimator_defaults() {
    ExperimentConfig c;
    c.experiment_id = "estimators";
    c.family = "single-switch";
    c.policies = {"forced:prime", "forced:double-prime", "uniform", "nonstat-sat"};
    c.horizons = {2000};
    c.segments = {2};
    c.gaps = {0.5};
    c.replications = 5000;
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Nonstationary satisficing bandit simulator"};
    app.require_subcommand(1);

    Flags simulate_flags, scaling_flags, lowerbound_flags, estimator_flags;
    std::uint64_t selfcheck_seed = 0;
    auto* simulate = app.add_subcommand("simulate", "run replications and write per-replication records");
    add_common_flags(simulate, simulate_flags);
    auto* scaling = app.add_subcommand("scaling", "regret vs (T, L) with the regret/(L ln T) statistic");
    add_common_flags(scaling, scaling_flags);
    auto* lowerbound = app.add_subcommand("lowerbound", "Bayesian regret floor on swap-window instances");
    add_common_flags(lowerbound, lowerbound_flags);
    auto* estimators = app.add_subcommand("estimators", "identification error of the block estimators");
    add_common_flags(estimators, estimator_flags);
    auto* selfcheck = app.add_subcommand("selfcheck", "run the invariant suite");
    selfcheck->add_option("--seed", selfcheck_seed, "seed for randomized checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitParameterError;
    }

    try {
        if (*simulate) {
            ExperimentConfig d;
            d.experiment_id = "simulate";
            const auto cfg = build_config(simulate_flags, ExperimentKind::simulate, d);
            emit_records(cfg, run_experiment(cfg));
        } else if (*scaling) {
            ExperimentConfig d;
            d.experiment_id = "scaling";
            const auto cfg = build_config(scaling_flags, ExperimentKind::scaling, d);
            const auto records = run_experiment(cfg);
            emit_records_to_file(cfg, records);
            write_scaling_report(std::cout, scaling_report(records));
        } else if (*lowerbound) {
            const auto cfg = build_config(lowerbound_flags, ExperimentKind::lowerbound, lowerbound_defaults());
            if (cfg.family != "swap-window") throw ParameterError("lowerbound needs the swap-window family");
            const auto records = run_experiment(cfg);
            emit_records_to_file(cfg, records);
            write_lowerbound_report(std::cout, lowerbound_report(records));
        } else if (*estimators) {
            const auto cfg = build_config(estimator_flags, ExperimentKind::estimators, estimator_defaults());
            const auto rows = estimator_report(cfg);
            if (cfg.out.empty()) {
                write_estimator_report(std::cout, rows);
            } else {
                std::ofstream os(cfg.out, std::ios::binary);
                if (!os) throw ParameterError("cannot write " + cfg.out);
                write_estimator_report(os, rows);
                write_estimator_report(std::cout, rows);
            }
        } else if (*selfcheck) {
            bool all = true;
            for (const auto& r : run_selfcheck(selfcheck_seed)) {
                std::cout << (r.pass ? "PASS " : "FAIL ") << r.name;
                if (!r.detail.empty()) std::cout << " (" << r.detail << ')';
                std::cout << '\n';
                all = all && r.pass;
            }
            return all ? 0 : kExitSelfcheckFailed;
        }
    } catch (const ParameterError& e) {
        std::cerr << "parameter error: " << e.what() << '\n';
        return kExitParameterError;
    } catch (const std::domain_error& e) {
        std::cerr << "parameter error: " << e.what() << '\n';
        return kExitParameterError;
    }
    return 0;
}
