#pragma once

#include "svmpc/harness.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace svmpc {

/// Malformed or invalid experiment document. `field` is the dotted path of the
/// offending entry (empty for syntax errors), `line` its 1-based line or 0.
class ConfigError : public ContractError {
public:
    ConfigError(std::string field, int line, const std::string& message);
    const std::string& field() const { return field_; }
    int line() const { return line_; }

private:
    std::string field_;
    int line_;
};

/// One experiment document: environment, cost, controller family and batch.
/// `trial.controller` is not used directly; the variant is rebuilt from the
/// fields below by trial_for() so one document can drive every method.
struct ExperimentConfig {
    TrialConfig trial;
    std::string variant = "stein_adaptive";
    double gamma = 0.5;
    Dro dro;
    SvgdConfig svgd;
    KernelSpec kernel;
    /// Explicit seed list; when empty the batch is seed_count seeds from base_seed.
    std::vector<std::uint64_t> seed_list;
    int seed_count = 32;
    std::uint64_t base_seed = 0;

    ControllerVariant controller_for(std::string_view variant_name) const;
    TrialConfig trial_for(std::string_view variant_name) const;
    TrialConfig trial_config() const { return trial_for(variant); }
    std::vector<std::uint64_t> seeds() const;
    std::string_view env_name() const { return to_string(trial.env.kind); }
    void validate() const;

    bool operator==(const ExperimentConfig&) const;
};

/// Reference setup for "cartpole", "rocket2d" or "racecar".
ExperimentConfig default_experiment(std::string_view env_name);

/// Parses a JSON experiment document. Omitted entries fall back to the
/// reference setup of the named environment; unknown keys are rejected.
ExperimentConfig parse_experiment(std::string_view text);
ExperimentConfig load_experiment(const std::filesystem::path& path);

/// Canonical JSON text with every entry resolved. Parsing it yields an equal config.
std::string dump_experiment(const ExperimentConfig& config);

/// 64-bit FNV-1a of the canonical dump.
std::uint64_t config_hash(const ExperimentConfig& config);
std::string hash_hex(std::uint64_t hash);

}  // namespace svmpc
