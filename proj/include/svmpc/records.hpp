#pragma once

#include "svmpc/experiment.hpp"
#include "svmpc/harness.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace svmpc {

std::string_view software_version();

/// Decimal text with 17 significant digits (exact round trip).
std::string format_number(double v);

/// Per-step log as CSV: t, state_*, control_*, cost, particle_<i>_<j>.
/// Every row is terminated by LF.
std::string trajectory_csv(const TrialResult& result);

/// Summary record of one trial with a fixed key order. Contains no wall-clock
/// data, so identical runs give identical text.
std::string trial_summary_json(const TrialResult& result, const ExperimentConfig& config,
                               std::string_view variant, std::uint64_t seed);

std::string aggregate_csv_header();
std::string aggregate_csv_row(std::string_view method, std::string_view env, const BatchStats& stats);

/// Track completion (running maximum of unwrapped lap progress) at x_0 and
/// after every step, held at its last value out to `steps` (steps + 1 values).
std::vector<double> progress_series(const TrialResult& result, const TrackGeometry& track, long steps);

struct ProgressBand {
    std::vector<double> t;
    std::vector<double> mean;
    std::vector<double> std;  // sample std across trials, 0 for one trial
};
ProgressBand progress_band(std::span<const TrialResult> results, const TrackGeometry& track, double dt,
                           long steps);

/// Fastest completion time among successful trials, NaN if none succeeded.
double best_completion_time(std::span<const TrialResult> results);

}  // namespace svmpc
