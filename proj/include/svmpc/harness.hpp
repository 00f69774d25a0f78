#pragma once

#include "svmpc/controllers.hpp"
#include "svmpc/cost.hpp"
#include "svmpc/dynamics.hpp"
#include "svmpc/mppi.hpp"
#include "svmpc/track.hpp"

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace svmpc {

/// Pole within angle_tol of upright and |omega| < rate_tol, held for `hold` seconds.
struct CartpoleCriterion {
    double angle_tol = 0.2;
    double rate_tol = 1.0;
    double hold = 0.5;
};

/// Rocket simultaneously over the pad, at pad height, upright and slow.
struct RocketCriterion {
    double pad_x = 0.5;
    double pad_y = 0.0;
    double half_width = 0.1;
    double altitude_tol = 0.05;
    double upright_tol = 0.15;
    double speed_tol = 0.2;
};

/// Unwrapped lap progress reaches `laps`.
struct RacingCriterion {
    TrackGeometry track;
    double laps = 1.0;
};

using SuccessCriterion = std::variant<CartpoleCriterion, RocketCriterion, RacingCriterion>;

void validate(const SuccessCriterion& criterion);

/// Evaluates the criterion on a state history sampled every dt (oldest first).
/// Cartpole uses the trailing hold window, rocket the last state, racing the
/// whole history (progress is unwrapped from the first state).
bool check_success(const SuccessCriterion& criterion, std::span<const Vec> states, double dt);

struct TrialConfig {
    EnvModel env;
    CostSpec cost;
    ControllerVariant controller = SteinAdaptive{};
    MppiConfig mppi;
    SuccessCriterion success = CartpoleCriterion{};
    Vec initial_state;
    /// Warm-start control repeated over the first plan; empty means all zeros (clamped).
    Vec initial_control;
    /// Parameter used by nominal MPC; empty means the prior-box midpoint.
    Vec nominal_params;
    int num_particles = 5;
    double duration = 40.0;
    double horizon_time = 0.4;
    std::uint64_t seed = 0;
    /// Log the KSD of the adapted particles each step (Stein variant with a
    /// differentiable kernel only; costs N*d*2 extra rollouts per step).
    bool record_ksd = false;

    int horizon_steps() const;
    Vec nominal() const;
    void validate() const;
};

enum class TerminalReason { Success, Timeout, SolverFailure };
std::string_view to_string(TerminalReason reason);

struct StepRecord {
    double t = 0.0;
    Vec state;      // state at t, before the control is applied
    Vec control;    // control applied over [t, t + dt)
    Mat particles;  // particle set after this step's inference update
    double cost = 0.0;
    Vec particle_mean;
    /// NaN unless TrialConfig::record_ksd applies.
    double ksd = std::numeric_limits<double>::quiet_NaN();
};

struct TrialResult {
    bool success = false;
    double completion_time = 0.0;
    TerminalReason reason = TerminalReason::Timeout;
    std::string message;
    Mat initial_particles;
    Vec final_state;
    std::vector<StepRecord> log;

    /// States x_0 .. x_n, i.e. every logged state followed by the final one.
    std::vector<Vec> state_history() const;
};

/// The receding-horizon loop: plan, apply the first control to the true system,
/// update the particles (Stein variant only), check for success.
TrialResult run_trial(const TrialConfig& config);

/// The DRO temperature actually used: the configured value, or 10x the nominal
/// cost of the warm-start plan when auto-calibration is requested.
double resolve_dro_lambda(const TrialConfig& config, const Dro& dro);

struct BatchStats {
    int trials = 0;
    int successes = 0;
    double success_pct = 0.0;
    /// Completion-time statistics over successful trials (sample std, 0 for n <= 1).
    double mean_time = 0.0;
    double std_time = 0.0;
    /// Same statistics over all trials, failures counted at their completion_time (= T).
    double mean_time_all = 0.0;
    double std_time_all = 0.0;
};

BatchStats aggregate(std::span<const TrialResult> results);

struct BatchResult {
    std::vector<std::uint64_t> seeds;
    std::vector<TrialResult> trials;
    BatchStats stats;
};

/// Runs one trial per seed on up to `jobs` threads. Results are stored by seed
/// index, so the outcome does not depend on scheduling.
BatchResult run_batch(const TrialConfig& base, std::span<const std::uint64_t> seeds, int jobs);

}  // namespace svmpc
