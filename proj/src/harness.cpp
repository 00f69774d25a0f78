#include "svmpc/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <random>
#include <thread>

namespace svmpc {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool cartpole_upright(const CartpoleCriterion& c, const Vec& x) {
    return std::abs(wrap_angle(x[cartpole::kPhi] - std::numbers::pi)) < c.angle_tol &&
           std::abs(x[cartpole::kOmega]) < c.rate_tol;
}

bool rocket_landed(const RocketCriterion& c, const Vec& x) {
    using namespace rocket;
    return std::abs(x[kX] - c.pad_x) < c.half_width && std::abs(x[kY] - c.pad_y) < c.altitude_tol &&
           std::abs(wrap_angle(x[kPhi])) < c.upright_tol && std::hypot(x[kVx], x[kVy]) < c.speed_tol;
}

void require_positive(double v, const char* what) {
    if (!(v > 0.0)) throw ContractError(std::string(what) + " must be > 0");
}

}  // namespace

void validate(const SuccessCriterion& criterion) {
    std::visit(overloaded{
                   [](const CartpoleCriterion& c) {
                       require_positive(c.angle_tol, "cartpole angle tolerance");
                       require_positive(c.rate_tol, "cartpole rate tolerance");
                       if (!(c.hold >= 0.0)) throw ContractError("cartpole hold must be >= 0");
                   },
                   [](const RocketCriterion& c) {
                       require_positive(c.half_width, "rocket pad half-width");
                       require_positive(c.altitude_tol, "rocket altitude tolerance");
                       require_positive(c.upright_tol, "rocket upright tolerance");
                       require_positive(c.speed_tol, "rocket speed tolerance");
                   },
                   [](const RacingCriterion& c) {
                       c.track.validate();
                       require_positive(c.laps, "racing lap count");
                   },
               },
               criterion);
}

bool check_success(const SuccessCriterion& criterion, std::span<const Vec> states, double dt) {
    if (states.empty()) return false;
    return std::visit(
        overloaded{
            [&](const CartpoleCriterion& c) {
                std::size_t run = 0;
                for (auto it = states.rbegin(); it != states.rend() && cartpole_upright(c, *it); ++it) ++run;
                return run > 0 && static_cast<double>(run - 1) * dt >= c.hold - 1e-9;
            },
            [&](const RocketCriterion& c) { return rocket_landed(c, states.back()); },
            [&](const RacingCriterion& c) { return track_progress(c.track, states) >= c.laps; },
        },
        criterion);
}

int TrialConfig::horizon_steps() const {
    const double ratio = horizon_time / env.dt;
    const long steps = std::lround(ratio);
    if (steps < 1 || std::abs(ratio - static_cast<double>(steps)) > 1e-6) {
        throw ContractError("planning horizon must be a positive multiple of dt");
    }
    return static_cast<int>(steps);
}

Vec TrialConfig::nominal() const {
    return nominal_params.size() == 0 ? box_midpoint(env.param_bounds) : nominal_params;
}

void TrialConfig::validate() const {
    env.validate();
    cost.validate(env.state_dim, env.control_dim);
    svmpc::validate(controller);
    mppi.validate(env.control_dim);
    svmpc::validate(success);
    if (initial_state.size() != env.state_dim || !initial_state.allFinite()) {
        throw ContractError("initial state dimension mismatch");
    }
    if (initial_control.size() != 0 && initial_control.size() != env.control_dim) {
        throw ContractError("initial control dimension mismatch");
    }
    if (nominal_params.size() != 0 &&
        (nominal_params.size() != env.param_dim || !inside(nominal_params, env.param_bounds))) {
        throw ContractError("nominal parameters must lie inside the parameter bounds");
    }
    if (num_particles < 1) throw ContractError("particle count must be >= 1");
    require_positive(duration, "trial duration");
    require_positive(horizon_time, "planning horizon");
    horizon_steps();
}

std::string_view to_string(TerminalReason reason) {
    switch (reason) {
        case TerminalReason::Success: return "success";
        case TerminalReason::Timeout: return "timeout";
        case TerminalReason::SolverFailure: return "solver_failure";
    }
    return "?";
}

std::vector<Vec> TrialResult::state_history() const {
    std::vector<Vec> states;
    states.reserve(log.size() + 1);
    for (const auto& rec : log) states.push_back(rec.state);
    states.push_back(final_state);
    return states;
}

namespace {

ControlPlan initial_plan(const TrialConfig& config) {
    const Vec u = config.initial_control.size() == 0 ? Vec(Vec::Zero(config.env.control_dim))
                                                     : config.initial_control;
    return ControlPlan::constant(config.horizon_steps(), config.env.clamp_control(u));
}

}  // namespace

double resolve_dro_lambda(const TrialConfig& config, const Dro& dro) {
    if (dro.lambda > 0.0) return dro.lambda;
    const double scale = trajectory_cost(config.cost, config.env, config.initial_state,
                                         initial_plan(config), config.nominal());
    return scale > 0.0 ? 10.0 * scale : 1.0;
}

TrialResult run_trial(const TrialConfig& config) {
    config.validate();
    const EnvModel& env = config.env;
    const double dt = env.dt;

    std::mt19937_64 init_rng(mix_seed(config.seed, 0));
    ParticleSet particles = ParticleSet::sample_uniform(env.param_bounds, config.num_particles, init_rng);
    const Vec nominal = config.nominal();

    ControllerVariant controller = config.controller;
    if (auto* dro = std::get_if<Dro>(&controller)) dro->lambda = resolve_dro_lambda(config, *dro);
    const auto* stein = std::get_if<SteinAdaptive>(&controller);

    TrialResult result;
    result.initial_particles = particles.matrix();
    std::vector<Vec> history{config.initial_state};
    Vec x = config.initial_state;
    ControlPlan warm = initial_plan(config);

    const auto total_steps = static_cast<long>(std::floor(config.duration / dt + 1e-9));
    if (check_success(config.success, history, dt)) {
        result.success = true;
        result.reason = TerminalReason::Success;
        result.completion_time = 0.0;
        result.final_state = x;
        return result;
    }

    result.reason = TerminalReason::Timeout;
    result.completion_time = config.duration;
    for (long k = 0; k < total_steps; ++k) {
        StepRecord rec;
        rec.t = static_cast<double>(k) * dt;
        rec.state = x;
        Vec x_next;
        try {
            const MppiResult solved = plan(controller, env, x, particles, nominal, warm, config.cost,
                                           config.mppi, mix_seed(config.seed, static_cast<std::uint64_t>(k) + 1));
            rec.control = env.clamp_control(solved.plan.control(0));
            rec.cost = solved.cost;
            x_next = step(env, x, rec.control, env.true_params);

            if (stein != nullptr) {
                // Gap posterior for the plan just computed, referenced to the pre-update mean.
                const Vec theta_ref = particle_mean(particles);
                const double ref_cost = trajectory_cost(config.cost, env, x, solved.plan, theta_ref);
                PosteriorModel model{
                    [&](const Vec& theta) {
                        return trajectory_cost(config.cost, env, x, solved.plan, theta) - ref_cost;
                    },
                    env.param_bounds};
                for (int m = 0; m < stein->svgd.inner_iterations; ++m) {
                    particles = svgd_step(particles, model, stein->kernel, stein->svgd);
                }
                if (config.record_ksd && stein->kernel.differentiable()) {
                    rec.ksd = ksd_estimate(particles, model, stein->kernel, stein->svgd);
                }
            }
            warm = shift_warm_start(solved.plan);
        } catch (const SolverError& e) {
            result.reason = TerminalReason::SolverFailure;
            result.message = e.what();
        } catch (const IntegrationError& e) {
            result.reason = TerminalReason::SolverFailure;
            result.message = e.what();
        } catch (const EvaluationError& e) {
            result.reason = TerminalReason::SolverFailure;
            result.message = e.what();
        }
        if (result.reason == TerminalReason::SolverFailure) {
            result.success = false;
            result.completion_time = config.duration;
            break;
        }

        rec.particles = particles.matrix();
        rec.particle_mean = particle_mean(particles);
        result.log.push_back(std::move(rec));
        x = x_next;
        history.push_back(x);
        if (check_success(config.success, history, dt)) {
            result.success = true;
            result.reason = TerminalReason::Success;
            result.completion_time = std::min(static_cast<double>(k + 1) * dt, config.duration);
            break;
        }
    }
    result.final_state = x;
    return result;
}

BatchStats aggregate(std::span<const TrialResult> results) {
    BatchStats stats;
    stats.trials = static_cast<int>(results.size());
    auto mean_std = [](const std::vector<double>& v, double& mean, double& sd) {
        mean = 0.0;
        sd = 0.0;
        if (v.empty()) return;
        for (double t : v) mean += t;
        mean /= static_cast<double>(v.size());
        if (v.size() < 2) return;
        double ss = 0.0;
        for (double t : v) ss += (t - mean) * (t - mean);
        sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
    };
    std::vector<double> ok;
    std::vector<double> all;
    for (const auto& r : results) {
        all.push_back(r.completion_time);
        if (r.success) ok.push_back(r.completion_time);
    }
    stats.successes = static_cast<int>(ok.size());
    stats.success_pct = stats.trials > 0 ? 100.0 * stats.successes / stats.trials : 0.0;
    mean_std(ok, stats.mean_time, stats.std_time);
    mean_std(all, stats.mean_time_all, stats.std_time_all);
    return stats;
}

BatchResult run_batch(const TrialConfig& base, std::span<const std::uint64_t> seeds, int jobs) {
    if (seeds.empty()) throw ContractError("run_batch: need at least one seed");
    base.validate();
    BatchResult batch;
    batch.seeds.assign(seeds.begin(), seeds.end());
    batch.trials.resize(seeds.size());

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < seeds.size(); i = next++) {
            TrialConfig cfg = base;
            cfg.seed = seeds[i];
            try {
                batch.trials[i] = run_trial(cfg);
            } catch (const std::exception& e) {
                TrialResult failed;
                failed.reason = TerminalReason::SolverFailure;
                failed.message = e.what();
                failed.completion_time = cfg.duration;
                failed.final_state = cfg.initial_state;
                batch.trials[i] = std::move(failed);
            }
        }
    };
    const int threads = std::clamp(jobs, 1, static_cast<int>(seeds.size()));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    batch.stats = aggregate(batch.trials);
    return batch;
}

}  // namespace svmpc
