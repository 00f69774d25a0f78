#pragma once

#include "svmpc/common.hpp"
#include "svmpc/dynamics.hpp"
#include "svmpc/plan.hpp"

#include <cstdint>
#include <functional>

namespace svmpc {

struct MppiConfig {
    int num_samples = 512;
    /// Per-channel perturbation std; empty means 10% of each control range.
    Vec noise_std;
    double temperature = 1.0;
    int iterations = 1;

    void validate(int control_dim) const;
    Vec resolved_noise(const Box& control_bounds) const;
};

using PlanObjective = std::function<double(const ControlPlan&)>;

struct MppiResult {
    ControlPlan plan;
    double cost = 0.0;
};

/// Path-integral sampling optimizer over open-loop control sequences.
///
/// Sample 0 is always the (clamped) warm start, samples 1..K-1 add Gaussian
/// noise and are clamped to the control bounds. Candidates are averaged with
/// weights exp(-(c - c_min) / temperature). If the average scores worse than
/// the best candidate, the best candidate is returned instead, so the result
/// never costs more than the warm start. Sample k draws from its own
/// substream mix_seed(seed, iteration * K + k).
MppiResult mppi_solve(const EnvModel& env, const ControlPlan& warm, const PlanObjective& objective,
                      const MppiConfig& config, std::uint64_t seed);

}  // namespace svmpc
