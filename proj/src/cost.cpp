#include "svmpc/cost.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace svmpc {

namespace {

void check_psd(const SmallMat& m, int dim, const char* name) {
    if (m.rows() != dim || m.cols() != dim) {
        throw ContractError(std::string("cost ") + name + ": expected " + std::to_string(dim) +
                            "x" + std::to_string(dim));
    }
    if (!m.allFinite()) throw ContractError(std::string("cost ") + name + ": non-finite entry");
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
        throw ContractError(std::string("cost ") + name + ": not symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Mat> eig(Mat(m), Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() < -1e-12 * scale) {
        throw ContractError(std::string("cost ") + name + ": not positive semi-definite");
    }
}

Vec state_error(const CostSpec& spec, const Vec& x, const Vec& x_des) {
    if (x.size() != x_des.size()) throw ContractError("cost: state dimension mismatch");
    Vec e = x - x_des;
    for (int i : spec.wrapped) e[i] = wrap_angle(e[i]);
    return e;
}

}  // namespace

void CostSpec::validate(int state_dim, int control_dim) const {
    check_psd(Q, state_dim, "Q");
    check_psd(R, control_dim, "R");
    check_psd(Qf, state_dim, "Qf");
    if (!track && goal.size() != state_dim) throw ContractError("cost goal dimension mismatch");
    for (int i : wrapped) {
        if (i < 0 || i >= state_dim) throw ContractError("cost wrapped index out of range");
    }
    if (track) track->validate();
    if (extra_terminal) {
        if (extra_terminal->weights.size() != state_dim) {
            throw ContractError("cost extra terminal weights dimension mismatch");
        }
        if (!(extra_terminal->epsilon > 0.0)) {
            throw ContractError("cost extra terminal epsilon must be > 0");
        }
    }
}

Vec CostSpec::desired(const Vec& x0, int t, double dt) const {
    if (!track) return goal;
    const double s0 = track_project(*track, x0[racecar::kX], x0[racecar::kY]);
    return track_reference(*track, s0 + track->ref_speed * dt * t);
}

double stage_cost(const CostSpec& spec, const Vec& x, const Vec& u, const Vec& x_des) {
    if (u.size() != spec.R.rows()) throw ContractError("stage_cost: control dimension mismatch");
    const Vec e = state_error(spec, x, x_des);
    return e.dot(spec.Q * e) + u.dot(spec.R * u);
}

double stage_cost(const CostSpec& spec, const Vec& x, const Vec& u) {
    return stage_cost(spec, x, u, spec.goal);
}

double terminal_cost(const CostSpec& spec, const Vec& x_T, const Vec& x_des, const Vec& x_0) {
    const Vec e = state_error(spec, x_T, x_des);
    double total = e.dot(spec.Qf * e);
    if (spec.extra_terminal) {
        const auto& term = *spec.extra_terminal;
        const Vec disp = (x_T - x_0).cwiseAbs();
        for (Eigen::Index k = 0; k < disp.size(); ++k) {
            total += term.weights[k] / (disp[k] + term.epsilon);
        }
    }
    return total;
}

double terminal_cost(const CostSpec& spec, const Vec& x_T) {
    return terminal_cost(spec, x_T, spec.goal, x_T);
}

double trajectory_cost(const CostSpec& spec, const EnvModel& env, const Vec& x0,
                       const ControlPlan& plan, const Vec& theta) {
    const int horizon = plan.horizon();
    const double s0 =
        spec.track ? track_project(*spec.track, x0[racecar::kX], x0[racecar::kY]) : 0.0;
    auto desired = [&](int t) {
        return spec.track ? track_reference(*spec.track, s0 + spec.track->ref_speed * env.dt * t)
                          : spec.goal;
    };
    Vec x = x0;
    double total = 0.0;
    for (int t = 0; t < horizon; ++t) {
        const Vec u = env.clamp_control(plan.control(t));
        total += stage_cost(spec, x, u, desired(t));
        x = step(env, x, u, theta);
    }
    return total + terminal_cost(spec, x, desired(horizon), x0);
}

double optimality_gap(const CostSpec& spec, const EnvModel& env, const Vec& x0,
                      const ControlPlan& plan, const Vec& theta, const Vec& theta_ref) {
    return trajectory_cost(spec, env, x0, plan, theta) -
           trajectory_cost(spec, env, x0, plan, theta_ref);
}

double combine_robust(double mean_param_cost, std::span<const double> particle_costs,
                      double gamma) {
    if (particle_costs.empty()) throw ContractError("robust cost needs at least one particle");
    const double ensemble =
        std::accumulate(particle_costs.begin(), particle_costs.end(), 0.0) /
        static_cast<double>(particle_costs.size());
    // Algebraically L(mean) + gamma * mean(L_i - L(mean)).
    return ensemble + (1.0 - gamma) * (mean_param_cost - ensemble);
}

RobustCostTerms robust_cost_terms(const CostSpec& spec, const EnvModel& env, const Vec& x0,
                                  const ControlPlan& plan, const ParticleSet& particles,
                                  double gamma) {
    if (!(gamma >= 0.0)) throw ContractError("robust cost: gamma must be >= 0");
    RobustCostTerms terms;
    terms.mean_param_cost = trajectory_cost(spec, env, x0, plan, particle_mean(particles));
    terms.particle_costs.reserve(static_cast<std::size_t>(particles.size()));
    for (int i = 0; i < particles.size(); ++i) {
        terms.particle_costs.push_back(trajectory_cost(spec, env, x0, plan, particles.particle(i)));
    }
    terms.value = combine_robust(terms.mean_param_cost, terms.particle_costs, gamma);
    return terms;
}

double robust_cost(const CostSpec& spec, const EnvModel& env, const Vec& x0,
                   const ControlPlan& plan, const ParticleSet& particles, double gamma) {
    return robust_cost_terms(spec, env, x0, plan, particles, gamma).value;
}

double log_mean_exp_risk(std::span<const double> costs, double lambda, double epsilon) {
    if (costs.empty()) throw ContractError("DRO cost needs at least one particle");
    if (!(lambda > 0.0)) throw ContractError("DRO lambda must be > 0");
    if (!(epsilon >= 0.0)) throw ContractError("DRO epsilon must be >= 0");
    const double top = *std::max_element(costs.begin(), costs.end());
    // mean(exp(z)) - 1 accumulated through expm1 keeps precision when lambda >> spread.
    double excess = 0.0;
    for (double c : costs) excess += std::expm1((c - top) / lambda);
    excess /= static_cast<double>(costs.size());
    return lambda * epsilon + top + lambda * std::log1p(excess);
}

double dro_risk_cost(const CostSpec& spec, const EnvModel& env, const Vec& x0,
                     const ControlPlan& plan, const ParticleSet& particles, double lambda,
                     double epsilon) {
    std::vector<double> costs;
    costs.reserve(static_cast<std::size_t>(particles.size()));
    for (int i = 0; i < particles.size(); ++i) {
        costs.push_back(trajectory_cost(spec, env, x0, plan, particles.particle(i)));
    }
    return log_mean_exp_risk(costs, lambda, epsilon);
}

}  // namespace svmpc
