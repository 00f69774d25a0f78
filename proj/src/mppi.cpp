#include "svmpc/mppi.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <vector>

namespace svmpc {

namespace {

ControlPlan clamp_plan(const EnvModel& env, ControlPlan plan) {
    for (int t = 0; t < plan.horizon(); ++t) {
        for (int c = 0; c < plan.control_dim(); ++c) {
            plan.controls(t, c) = env.control_bounds[static_cast<std::size_t>(c)].clamp(plan.controls(t, c));
        }
    }
    return plan;
}

double safe_cost(const PlanObjective& objective, const ControlPlan& plan) {
    try {
        const double c = objective(plan);
        return std::isfinite(c) ? c : std::numeric_limits<double>::infinity();
    } catch (const IntegrationError&) {
        return std::numeric_limits<double>::infinity();
    }
}

}  // namespace

void MppiConfig::validate(int control_dim) const {
    if (num_samples < 1) throw ContractError("mppi num_samples must be >= 1");
    if (!(temperature > 0.0)) throw ContractError("mppi temperature must be > 0");
    if (iterations < 1) throw ContractError("mppi iterations must be >= 1");
    if (noise_std.size() != 0) {
        if (noise_std.size() != control_dim) throw ContractError("mppi noise_std dimension mismatch");
        for (Eigen::Index i = 0; i < noise_std.size(); ++i) {
            if (!(noise_std[i] > 0.0)) throw ContractError("mppi noise_std must be > 0");
        }
    }
}

Vec MppiConfig::resolved_noise(const Box& control_bounds) const {
    if (noise_std.size() != 0) return noise_std;
    Vec out(static_cast<Eigen::Index>(control_bounds.size()));
    for (std::size_t i = 0; i < control_bounds.size(); ++i) {
        out[static_cast<Eigen::Index>(i)] = 0.1 * control_bounds[i].width();
    }
    return out;
}

MppiResult mppi_solve(const EnvModel& env, const ControlPlan& warm, const PlanObjective& objective,
                      const MppiConfig& config, std::uint64_t seed) {
    config.validate(env.control_dim);
    if (warm.control_dim() != env.control_dim) throw ContractError("mppi: warm plan dimension mismatch");
    const Vec noise = config.resolved_noise(env.control_bounds);
    const int k_total = config.num_samples;
    const int horizon = warm.horizon();

    MppiResult best{clamp_plan(env, warm), 0.0};
    best.cost = safe_cost(objective, best.plan);

    std::vector<ControlPlan> samples(static_cast<std::size_t>(k_total));
    std::vector<double> costs(static_cast<std::size_t>(k_total));
    for (int it = 0; it < config.iterations; ++it) {
        const ControlPlan center = best.plan;
        for (int k = 0; k < k_total; ++k) {
            ControlPlan candidate = center;
            if (k > 0) {
                std::mt19937_64 rng(mix_seed(seed, static_cast<std::uint64_t>(it) * k_total + k));
                std::normal_distribution<double> gauss(0.0, 1.0);
                for (int t = 0; t < horizon; ++t) {
                    for (int c = 0; c < env.control_dim; ++c) candidate.controls(t, c) += noise[c] * gauss(rng);
                }
                candidate = clamp_plan(env, std::move(candidate));
            }
            samples[static_cast<std::size_t>(k)] = std::move(candidate);
        }
        costs[0] = best.cost;
        for (int k = 1; k < k_total; ++k) {
            costs[static_cast<std::size_t>(k)] = safe_cost(objective, samples[static_cast<std::size_t>(k)]);
        }

        int argmin = 0;
        for (int k = 1; k < k_total; ++k) {
            if (costs[static_cast<std::size_t>(k)] < costs[static_cast<std::size_t>(argmin)]) argmin = k;
        }
        const double c_min = costs[static_cast<std::size_t>(argmin)];
        if (!std::isfinite(c_min)) throw SolverError("mppi: every sampled plan has a non-finite cost");

        Mat blended = Mat::Zero(horizon, env.control_dim);
        double weight_sum = 0.0;
        for (int k = 0; k < k_total; ++k) {
            const double c = costs[static_cast<std::size_t>(k)];
            if (!std::isfinite(c)) continue;
            const double w = std::exp(-(c - c_min) / config.temperature);
            blended += w * samples[static_cast<std::size_t>(k)].controls;
            weight_sum += w;
        }
        ControlPlan average(blended / weight_sum);
        average = clamp_plan(env, std::move(average));  // rounding only; the blend is convex
        const double average_cost = safe_cost(objective, average);
        if (average_cost <= c_min) {
            best = {std::move(average), average_cost};
        } else {
            best = {samples[static_cast<std::size_t>(argmin)], c_min};
        }
    }
    return best;
}

}  // namespace svmpc
