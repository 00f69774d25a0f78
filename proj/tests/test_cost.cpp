#include "doctest.h"

#include "svmpc/cost.hpp"
#include "test_util.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

using namespace svmpc;
using test::diag;
using test::vec;

namespace {

CostSpec scalar_spec(double q, double r, double qf) {
    CostSpec spec;
    spec.Q = diag({q});
    spec.R = diag({r});
    spec.Qf = diag({qf});
    spec.goal = vec({0.0});
    return spec;
}

CostSpec cartpole_spec() {
    CostSpec spec;
    spec.Q = diag({1, 10, 1, 0.1});
    spec.R = diag({1e-4});
    spec.Qf = spec.Q;
    spec.goal = vec({0, std::acos(-1.0), 0, 0});
    spec.wrapped = {1};
    return spec;
}

ControlPlan random_plan(std::mt19937_64& rng, int horizon, const Box& bounds) {
    Mat c(horizon, static_cast<Eigen::Index>(bounds.size()));
    for (int t = 0; t < horizon; ++t) {
        for (std::size_t j = 0; j < bounds.size(); ++j) {
            std::uniform_real_distribution<double> u(bounds[j].lo, bounds[j].hi);
            c(t, static_cast<Eigen::Index>(j)) = u(rng);
        }
    }
    return ControlPlan(c);
}

ParticleSet random_particles(std::mt19937_64& rng, const Box& bounds, int n) {
    return ParticleSet::sample_uniform(bounds, n, rng);
}

}  // namespace

TEST_CASE("stage cost examples") {
    CostSpec spec;
    spec.Q = diag({1, 1});
    spec.R = diag({1});
    spec.Qf = diag({2, 2});
    spec.goal = vec({0.5, -1.0});
    CHECK(stage_cost(spec, spec.goal, vec({0.0})) == 0.0);
    CHECK(stage_cost(spec, vec({1.5, -1.0}), vec({2.0})) == 5.0);
    spec.Q = diag({0, 0});
    CHECK(stage_cost(spec, vec({100.0, 7.0}), vec({3.0})) == 9.0);
    CHECK_THROWS_AS(stage_cost(spec, vec({1.0}), vec({0.0})), ContractError);
    CHECK_THROWS_AS(stage_cost(spec, vec({1.0, 0.0}), vec({0.0, 1.0})), ContractError);
}

TEST_CASE("terminal cost examples") {
    CostSpec spec;
    spec.Q = diag({1, 1});
    spec.R = diag({1});
    spec.Qf = diag({2, 2});
    spec.goal = vec({0.0, 0.0});
    CHECK(terminal_cost(spec, spec.goal) == 0.0);
    CHECK(terminal_cost(spec, vec({1.0, 1.0})) == 4.0);

    spec.extra_terminal = InverseDisplacementTerm{vec({1.0, 2.0}), 1e-3};
    // Zero displacement: w . (1 / eps).
    CHECK(terminal_cost(spec, vec({0.0, 0.0}), spec.goal, vec({0.0, 0.0})) == doctest::Approx(3000.0));
    CHECK(terminal_cost(spec, vec({1.0, 0.0}), spec.goal, vec({0.0, 0.0})) ==
          doctest::Approx(2.0 + 1.0 / 1.001 + 2000.0));
}

TEST_CASE("angle-wrapped components use the short way round") {
    const CostSpec spec = cartpole_spec();
    const double pi = std::acos(-1.0);
    CHECK(stage_cost(spec, vec({0, -pi, 0, 0}), vec({0.0})) == doctest::Approx(0.0));
    CHECK(stage_cost(spec, vec({0, pi + 0.1, 0, 0}), vec({0.0})) ==
          doctest::Approx(stage_cost(spec, vec({0, pi - 0.1, 0, 0}), vec({0.0}))));
}

TEST_CASE("trajectory cost of the decay system matches the RK4 closed form") {
    const double dt = 0.1;
    const EnvModel env = test::decay_env(dt);
    const CostSpec spec = scalar_spec(1.0, 0.0, 3.0);
    // RK4 on xdot = -x multiplies the state by the degree-4 Taylor polynomial of exp(-dt).
    const double rho = 1 - dt + dt * dt / 2 - dt * dt * dt / 6 + dt * dt * dt * dt / 24;
    const ControlPlan zero = ControlPlan::constant(2, vec({0.0}));
    const double expected = 1.0 + rho * rho + 3.0 * std::pow(rho, 4);
    CHECK(trajectory_cost(spec, env, vec({1.0}), zero, vec({1.0})) == doctest::Approx(expected).epsilon(1e-14));
    CHECK(std::abs(expected - (1.0 + std::exp(-2 * dt) + 3.0 * std::exp(-4 * dt))) < 1e-6);

    // Empty horizon: terminal cost at x0 only.
    const ControlPlan empty(Mat(0, 1));
    CHECK(trajectory_cost(spec, env, vec({2.0}), empty, vec({1.0})) == 12.0);

    // Dead parameter.
    CHECK(trajectory_cost(spec, env, vec({1.0}), zero, vec({0.6})) ==
          trajectory_cost(spec, env, vec({1.0}), zero, vec({1.9})));
}

TEST_CASE("optimality gap") {
    const EnvModel decay = test::decay_env(0.1);
    const CostSpec dspec = scalar_spec(1.0, 0.1, 1.0);
    const ControlPlan p = ControlPlan::constant(3, vec({0.5}));
    CHECK(optimality_gap(dspec, decay, vec({1.0}), p, vec({0.7}), vec({1.5})) == 0.0);

    const EnvModel env = make_cartpole();
    const CostSpec spec = cartpole_spec();
    std::mt19937_64 rng(21);
    const ControlPlan plan = random_plan(rng, 20, env.control_bounds);
    const Vec x0 = vec({0, 0, 0, 0});
    const Vec th = vec({0.6, 0.8});
    const Vec ref = vec({0.5, 0.75});
    CHECK(optimality_gap(spec, env, x0, plan, ref, ref) == 0.0);
    const double a = trajectory_cost(spec, env, x0, plan, th);
    const double b = trajectory_cost(spec, env, x0, plan, ref);
    CHECK(optimality_gap(spec, env, x0, plan, th, ref) == a - b);
    CHECK(a != b);
}

TEST_CASE("robust cost examples") {
    const std::vector<double> costs = {2.0, 5.0};
    CHECK(combine_robust(3.0, costs, 0.5) == 3.25);
    CHECK(combine_robust(3.0, costs, 0.0) == 3.0);
    CHECK(combine_robust(3.0, costs, 1.0) == 3.5);
    CHECK_THROWS_AS(combine_robust(3.0, std::vector<double>{}, 0.5), ContractError);
}

TEST_CASE("robust cost with gamma = 1 is the ensemble mean on random instances") {
    const EnvModel env = make_cartpole();
    const CostSpec spec = cartpole_spec();
    std::mt19937_64 rng(99);
    for (int i = 0; i < 50; ++i) {
        const ControlPlan plan = random_plan(rng, 10, env.control_bounds);
        const ParticleSet ps = random_particles(rng, env.param_bounds, 1 + i % 7);
        const Vec x0 = test::random_vec(rng, 4, -1.0, 1.0);
        const RobustCostTerms terms = robust_cost_terms(spec, env, x0, plan, ps, 1.0);
        const double mean = std::accumulate(terms.particle_costs.begin(), terms.particle_costs.end(), 0.0) /
                            static_cast<double>(terms.particle_costs.size());
        CHECK(std::abs(terms.value - mean) <= 1e-12);
        CHECK(robust_cost(spec, env, x0, plan, ps, 0.0) == terms.mean_param_cost);
        CHECK(terms.mean_param_cost ==
              trajectory_cost(spec, env, x0, plan, particle_mean(ps)));

        // Affine in gamma: three collinear points.
        const double r0 = robust_cost(spec, env, x0, plan, ps, 0.0);
        const double r1 = robust_cost(spec, env, x0, plan, ps, 0.5);
        const double r2 = robust_cost(spec, env, x0, plan, ps, 2.0);
        CHECK(r1 - r0 == doctest::Approx((r2 - r0) / 4.0).epsilon(1e-9).scale(std::abs(r0)));
    }
    const ParticleSet one = random_particles(rng, env.param_bounds, 3);
    CHECK_THROWS_AS(robust_cost(spec, env, vec({0, 0, 0, 0}), ControlPlan::constant(2, vec({0.0})), one, -0.1),
                    ContractError);
}

TEST_CASE("DRO risk examples") {
    CHECK(log_mean_exp_risk(std::vector<double>{3.0}, 2.0, 0.1) == doctest::Approx(3.2).epsilon(1e-15));
    const std::vector<double> two = {2.0, 4.0};
    CHECK(std::abs(log_mean_exp_risk(two, 1e6, 0.0) - 3.0) < 1e-5);
    CHECK(std::abs(log_mean_exp_risk(two, 100.0, 0.0) - (3.0 + 1.0 / 200.0)) < 1e-4);
    // Huge costs do not overflow.
    CHECK(std::isfinite(log_mean_exp_risk(std::vector<double>{1e6, 2e6}, 1.0, 0.0)));
    CHECK(log_mean_exp_risk(std::vector<double>{1e6, 2e6}, 1.0, 0.0) ==
          doctest::Approx(2e6 - std::log(2.0)));
    CHECK_THROWS_AS(log_mean_exp_risk(two, 0.0, 0.1), ContractError);
    CHECK_THROWS_AS(log_mean_exp_risk(two, 1.0, -0.1), ContractError);
    CHECK_THROWS_AS(log_mean_exp_risk(std::vector<double>{}, 1.0, 0.1), ContractError);
}

TEST_CASE("DRO risk properties on random cost vectors") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> c(0.0, 50.0);
    std::uniform_int_distribution<int> n(1, 12);
    for (int i = 0; i < 200; ++i) {
        std::vector<double> costs(static_cast<std::size_t>(n(rng)));
        for (auto& v : costs) v = c(rng);
        const double mean = std::accumulate(costs.begin(), costs.end(), 0.0) / costs.size();
        double var = 0.0;
        for (double v : costs) var += (v - mean) * (v - mean);
        var /= costs.size();
        const auto [lo, hi] = std::minmax_element(costs.begin(), costs.end());
        const double range = std::max(*hi - *lo, 1e-9);

        // Second-order expansion for large temperature.
        const double lambda = 100.0 * range;
        CHECK(std::abs(log_mean_exp_risk(costs, lambda, 0.0) - (mean + var / (2 * lambda))) < 1e-3 * range);

        // Jensen and monotonicity in lambda.
        double prev = INFINITY;
        for (double l : {0.1, 1.0, 10.0, 100.0, 1000.0}) {
            const double v = log_mean_exp_risk(costs, l, 0.0);
            CHECK(v >= mean - 1e-9 * std::max(1.0, mean));
            CHECK(v <= prev + 1e-9 * std::max(1.0, mean));
            CHECK(log_mean_exp_risk(costs, l, 0.3) - 0.3 * l == doctest::Approx(v));
            prev = v;
        }
    }
}

TEST_CASE("DRO on rollouts agrees with the cost-vector form") {
    const EnvModel env = make_cartpole();
    const CostSpec spec = cartpole_spec();
    std::mt19937_64 rng(4);
    const ControlPlan plan = random_plan(rng, 10, env.control_bounds);
    const ParticleSet ps = random_particles(rng, env.param_bounds, 5);
    const Vec x0 = vec({0, 0.2, 0, 0});
    std::vector<double> costs;
    for (int i = 0; i < ps.size(); ++i) costs.push_back(trajectory_cost(spec, env, x0, plan, ps.particle(i)));
    CHECK(dro_risk_cost(spec, env, x0, plan, ps, 7.0, 0.1) == log_mean_exp_risk(costs, 7.0, 0.1));
    CHECK(dro_risk_cost(spec, env, x0, plan, ps, 7.0, 0.0) >= robust_cost(spec, env, x0, plan, ps, 1.0));
}

TEST_CASE("costs are nonnegative for PSD weights") {
    const EnvModel env = make_cartpole();
    const CostSpec spec = cartpole_spec();
    std::mt19937_64 rng(12);
    for (int i = 0; i < 50; ++i) {
        const ControlPlan plan = random_plan(rng, 10, env.control_bounds);
        const Vec x0 = test::random_vec(rng, 4, -2.0, 2.0);
        CHECK(trajectory_cost(spec, env, x0, plan, env.true_params) >= 0.0);
    }
}

TEST_CASE("cost validation") {
    CostSpec spec = cartpole_spec();
    CHECK_NOTHROW(spec.validate(4, 1));
    CHECK_THROWS_AS(spec.validate(3, 1), ContractError);
    spec.Q(0, 1) = 0.5;
    CHECK_THROWS_AS(spec.validate(4, 1), ContractError);  // asymmetric
    spec = cartpole_spec();
    spec.Q(2, 2) = -1.0;
    CHECK_THROWS_AS(spec.validate(4, 1), ContractError);  // indefinite
    spec = cartpole_spec();
    spec.wrapped = {4};
    CHECK_THROWS_AS(spec.validate(4, 1), ContractError);
    spec = cartpole_spec();
    spec.extra_terminal = InverseDisplacementTerm{vec({1.0, 1.0, 1.0, 1.0}), 0.0};
    CHECK_THROWS_AS(spec.validate(4, 1), ContractError);
}

TEST_CASE("racing reference advances from the rollout start") {
    CostSpec spec;
    spec.track = TrackGeometry{};
    const Vec x0 = vec({-2.5, -2.0, 0, 0, 0});
    const Vec d = spec.desired(x0, 10, 0.015);
    CHECK(d[0] == doctest::Approx(-2.5 + 2.0 * 0.15));
    CHECK(d[1] == doctest::Approx(-2.0));
}
