#pragma once

#include "svmpc/common.hpp"
#include "svmpc/dynamics.hpp"
#include "svmpc/plan.hpp"
#include "svmpc/svgd.hpp"
#include "svmpc/track.hpp"

#include <optional>
#include <span>
#include <vector>

namespace svmpc {

using SmallMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, kMaxDim, kMaxDim>;

/// Terminal reward for motion over the horizon:
///   r = sum_k w_k / (|x_T[k] - x_0[k]| + eps)
struct InverseDisplacementTerm {
    Vec weights;
    double epsilon = 1e-3;
};

/// Quadratic stage/terminal cost weights and the goal they pull toward.
struct CostSpec {
    SmallMat Q;
    SmallMat R;
    SmallMat Qf;
    Vec goal;
    /// When set, the goal is replaced by a track-following reference that
    /// advances from the rollout's start point at the track reference speed.
    std::optional<TrackGeometry> track;
    std::optional<InverseDisplacementTerm> extra_terminal;
    /// State components whose error is wrapped into (-pi, pi].
    std::vector<int> wrapped;

    /// Checks dimensions, symmetry and positive semi-definiteness.
    void validate(int state_dim, int control_dim) const;

    /// Desired state at rollout step t for a rollout starting at x0.
    Vec desired(const Vec& x0, int t, double dt) const;
};

double stage_cost(const CostSpec& spec, const Vec& x, const Vec& u, const Vec& x_des);
double stage_cost(const CostSpec& spec, const Vec& x, const Vec& u);

/// Quadratic terminal cost plus the optional extra term r(x_0, x_T).
double terminal_cost(const CostSpec& spec, const Vec& x_T, const Vec& x_des, const Vec& x_0);
double terminal_cost(const CostSpec& spec, const Vec& x_T);

/// Forward-shooting rollout cost: sum of stage costs over the horizon plus the
/// terminal cost at x_H. Dynamics hold by construction, so this is also the
/// Lagrangian value.
double trajectory_cost(const CostSpec& spec, const EnvModel& env, const Vec& x0,
                       const ControlPlan& plan, const Vec& theta);

/// trajectory_cost(theta) - trajectory_cost(theta_ref).
double optimality_gap(const CostSpec& spec, const EnvModel& env, const Vec& x0,
                      const ControlPlan& plan, const Vec& theta, const Vec& theta_ref);

struct RobustCostTerms {
    double mean_param_cost = 0.0;       // cost at the particle mean
    std::vector<double> particle_costs;
    double value = 0.0;
};

/// L(mean) + gamma * mean_i(L(theta_i) - L(mean)); N + 1 rollouts.
RobustCostTerms robust_cost_terms(const CostSpec& spec, const EnvModel& env, const Vec& x0,
                                  const ControlPlan& plan, const ParticleSet& particles,
                                  double gamma);
double robust_cost(const CostSpec& spec, const EnvModel& env, const Vec& x0,
                   const ControlPlan& plan, const ParticleSet& particles, double gamma);

/// Combines precomputed costs; exact (bitwise) ensemble mean at gamma = 1.
double combine_robust(double mean_param_cost, std::span<const double> particle_costs, double gamma);

/// lambda * eps + lambda * log(mean_i exp(costs_i / lambda)), evaluated stably.
double log_mean_exp_risk(std::span<const double> costs, double lambda, double epsilon);

double dro_risk_cost(const CostSpec& spec, const EnvModel& env, const Vec& x0,
                     const ControlPlan& plan, const ParticleSet& particles, double lambda,
                     double epsilon);

}  // namespace svmpc
