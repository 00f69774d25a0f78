// svmpc_bench: run trials, seeded batches, the kernel ablation and the racing
// progress study from a JSON experiment file.

#include "svmpc/experiment.hpp"
#include "svmpc/harness.hpp"
#include "svmpc/records.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace svmpc;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;

struct Common {
    std::string config_path;
    std::string out_dir = "out";
    bool config_dump = false;
    int jobs = 1;
    std::optional<int> seeds;
};

void write_file(const fs::path& path, const std::string& text) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

void write_runtime(const fs::path& dir, double seconds) {
    write_file(dir / "runtime.json", "{\n  \"wall_clock_seconds\": " + format_number(seconds) + "\n}\n");
}

std::vector<std::uint64_t> batch_seeds(const ExperimentConfig& cfg, const Common& opt) {
    if (!opt.seeds) return cfg.seeds();
    if (*opt.seeds < 1) throw ConfigError("--seeds", 0, "--seeds: must be >= 1");
    std::vector<std::uint64_t> out;
    for (int i = 0; i < *opt.seeds; ++i) out.push_back(cfg.base_seed + static_cast<std::uint64_t>(i));
    return out;
}

std::string seed_stem(std::uint64_t seed) { return "seed_" + std::to_string(seed); }

void print_stats(std::string_view label, const BatchStats& s) {
    std::printf("%-16s success %6.2f%%  time %.3f +- %.3f s  (%d/%d)\n", std::string(label).c_str(),
                s.success_pct, s.mean_time, s.std_time, s.successes, s.trials);
}

void write_trials(const fs::path& dir, const BatchResult& batch, const ExperimentConfig& cfg,
                  std::string_view variant, bool trajectories) {
    for (std::size_t i = 0; i < batch.trials.size(); ++i) {
        const auto stem = seed_stem(batch.seeds[i]);
        write_file(dir / (stem + ".json"), trial_summary_json(batch.trials[i], cfg, variant, batch.seeds[i]));
        if (trajectories) write_file(dir / (stem + ".csv"), trajectory_csv(batch.trials[i]));
    }
}

int cmd_run(const Common& opt, std::uint64_t seed, const std::string& variant_override) {
    ExperimentConfig cfg = load_experiment(opt.config_path);
    if (!variant_override.empty()) cfg.variant = variant_override;
    cfg.validate();
    if (opt.config_dump) {
        std::cout << dump_experiment(cfg);
        return 0;
    }
    TrialConfig trial = cfg.trial_config();
    trial.seed = seed;
    const auto t0 = std::chrono::steady_clock::now();
    const TrialResult result = run_trial(trial);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    const fs::path dir(opt.out_dir);
    write_file(dir / "summary.json", trial_summary_json(result, cfg, cfg.variant, seed));
    write_file(dir / "trajectory.csv", trajectory_csv(result));
    write_runtime(dir, wall);
    std::printf("%s %s seed %llu: %s at t=%.3f s (%zu steps)\n", std::string(cfg.env_name()).c_str(),
                cfg.variant.c_str(), static_cast<unsigned long long>(seed),
                std::string(to_string(result.reason)).c_str(), result.completion_time, result.log.size());
    if (result.reason == TerminalReason::SolverFailure) {
        std::cerr << "solver failure: " << result.message << "\n";
        return kExitSolver;
    }
    return 0;
}

int cmd_batch(const Common& opt, const std::string& variant_override, bool trajectories) {
    ExperimentConfig cfg = load_experiment(opt.config_path);
    if (!variant_override.empty()) cfg.variant = variant_override;
    cfg.validate();
    const auto seeds = batch_seeds(cfg, opt);
    if (opt.config_dump) {
        std::cout << dump_experiment(cfg);
        return 0;
    }
    const auto t0 = std::chrono::steady_clock::now();
    const BatchResult batch = run_batch(cfg.trial_config(), seeds, opt.jobs);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    const fs::path dir(opt.out_dir);
    write_trials(dir / "trials", batch, cfg, cfg.variant, trajectories);
    write_file(dir / "aggregate.csv",
               aggregate_csv_header() + aggregate_csv_row(cfg.variant, cfg.env_name(), batch.stats));
    write_runtime(dir, wall);
    print_stats(cfg.variant, batch.stats);
    return 0;
}

int cmd_ablate(const Common& opt) {
    ExperimentConfig cfg = load_experiment(opt.config_path);
    if (cfg.trial.env.kind != EnvKind::Rocket2d) {
        throw ConfigError("env.name", 0, "env.name: the kernel ablation runs on rocket2d");
    }
    cfg.variant = "stein_adaptive";
    cfg.validate();
    const auto seeds = batch_seeds(cfg, opt);
    if (opt.config_dump) {
        std::cout << dump_experiment(cfg);
        return 0;
    }
    const fs::path dir(opt.out_dir);
    std::string table = "kernel,success_pct,mean_time,std_time,trials,successes,mean_final_ksd\n";
    const auto t0 = std::chrono::steady_clock::now();
    for (KernelKind kind : {KernelKind::Imq, KernelKind::Rbf, KernelKind::Constant}) {
        ExperimentConfig k = cfg;
        k.kernel.kind = kind;
        k.trial.record_ksd = kind != KernelKind::Constant;
        const BatchResult batch = run_batch(k.trial_config(), seeds, opt.jobs);
        const std::string name(to_string(kind));
        write_trials(dir / name, batch, k, k.variant, false);

        std::string ksd_cell;
        if (k.trial.record_ksd) {
            double sum = 0.0;
            int n = 0;
            for (const auto& t : batch.trials) {
                if (!t.log.empty() && std::isfinite(t.log.back().ksd)) {
                    sum += t.log.back().ksd;
                    ++n;
                }
            }
            if (n > 0) ksd_cell = format_number(sum / n);
        }
        const auto& s = batch.stats;
        table += name + "," + format_number(s.success_pct) + "," + format_number(s.mean_time) + "," +
                 format_number(s.std_time) + "," + std::to_string(s.trials) + "," +
                 std::to_string(s.successes) + "," + ksd_cell + "\n";
        print_stats(name, s);
    }
    write_file(dir / "ablation.csv", table);
    write_runtime(dir, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    return 0;
}

int cmd_race(const Common& opt, std::vector<std::string> methods) {
    ExperimentConfig cfg = load_experiment(opt.config_path);
    if (cfg.trial.env.kind != EnvKind::Racecar) {
        throw ConfigError("env.name", 0, "env.name: race-progress needs the racecar environment");
    }
    if (methods.empty()) methods = {"stein_adaptive", "emppi", "dro", "nominal_mpc"};
    for (const auto& m : methods) {
        try {
            variant_from_name(m);
        } catch (const ContractError&) {
            throw ConfigError("--methods", 0, "--methods: unknown variant '" + m + "'");
        }
    }
    cfg.validate();
    const auto seeds = batch_seeds(cfg, opt);
    if (opt.config_dump) {
        std::cout << dump_experiment(cfg);
        return 0;
    }
    const fs::path dir(opt.out_dir);
    const TrackGeometry track = *cfg.trial.cost.track;
    const double dt = cfg.trial.env.dt;
    const auto steps = static_cast<long>(std::floor(cfg.trial.duration / dt + 1e-9));
    std::string progress = "method,t,mean_progress,std_progress\n";
    std::string laps = "method,success_pct,best_lap_time,mean_time,std_time,trials,successes\n";
    const auto t0 = std::chrono::steady_clock::now();
    for (const auto& m : methods) {
        const BatchResult batch = run_batch(cfg.trial_for(m), seeds, opt.jobs);
        write_trials(dir / m, batch, cfg, m, false);
        const ProgressBand band = progress_band(batch.trials, track, dt, steps);
        for (std::size_t k = 0; k < band.t.size(); ++k) {
            progress += m + "," + format_number(band.t[k]) + "," + format_number(band.mean[k]) + "," +
                        format_number(band.std[k]) + "\n";
        }
        const auto& s = batch.stats;
        const double best = best_completion_time(batch.trials);
        laps += m + "," + format_number(s.success_pct) + "," + (std::isnan(best) ? "" : format_number(best)) +
                "," + format_number(s.mean_time) + "," + format_number(s.std_time) + "," +
                std::to_string(s.trials) + "," + std::to_string(s.successes) + "\n";
        print_stats(m, s);
    }
    write_file(dir / "progress.csv", progress);
    write_file(dir / "laps.csv", laps);
    write_runtime(dir, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    return 0;
}

void add_common(CLI::App* cmd, Common& opt, bool batch_options) {
    cmd->add_option("config", opt.config_path, "experiment JSON file")->required();
    cmd->add_option("--out", opt.out_dir, "output directory")->capture_default_str();
    cmd->add_flag("--config-dump", opt.config_dump, "print the resolved config and exit");
    if (batch_options) {
        cmd->add_option("--seeds", opt.seeds, "number of seeds, counted from batch.base_seed");
        cmd->add_option("--jobs", opt.jobs, "parallel trials")->capture_default_str()->check(CLI::PositiveNumber);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stein variational uncertainty-adaptive MPC benchmark"};
    app.set_version_flag("--version", std::string(software_version()));
    app.require_subcommand(1);

    Common opt;
    std::uint64_t seed = 0;
    std::string variant;
    bool trajectories = false;
    std::vector<std::string> methods;

    auto* run = app.add_subcommand("run", "run one trial");
    add_common(run, opt, false);
    run->add_option("--seed", seed, "trial seed")->capture_default_str();
    run->add_option("--variant", variant, "override controller.variant");

    auto* batch = app.add_subcommand("batch", "run a seeded batch and aggregate it");
    add_common(batch, opt, true);
    batch->add_option("--variant", variant, "override controller.variant");
    batch->add_flag("--trajectories", trajectories, "also write per-trial trajectory CSVs");

    auto* ablate = app.add_subcommand("ablate-kernels", "rocket batch for the IMQ, RBF and constant kernels");
    add_common(ablate, opt, true);

    auto* race = app.add_subcommand("race-progress", "lap-progress series per method on the racecar");
    add_common(race, opt, true);
    race->add_option("--methods", methods, "variants to compare")->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (run->parsed()) return cmd_run(opt, seed, variant);
        if (batch->parsed()) return cmd_batch(opt, variant, trajectories);
        if (ablate->parsed()) return cmd_ablate(opt);
        if (race->parsed()) return cmd_race(opt, methods);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const ContractError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
