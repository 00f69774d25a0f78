#include "svmpc/controllers.hpp"

#include <string>
#include <vector>

namespace svmpc {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::vector<Vec> rows_of(const ParticleSet& particles) {
    std::vector<Vec> rows;
    rows.reserve(static_cast<std::size_t>(particles.size()));
    for (int i = 0; i < particles.size(); ++i) rows.push_back(particles.particle(i));
    return rows;
}

}  // namespace

std::string_view variant_name(const ControllerVariant& variant) {
    return std::visit(overloaded{
                          [](const SteinAdaptive&) { return std::string_view("stein_adaptive"); },
                          [](const Emppi&) { return std::string_view("emppi"); },
                          [](const Dro&) { return std::string_view("dro"); },
                          [](const NominalMpc&) { return std::string_view("nominal_mpc"); },
                      },
                      variant);
}

ControllerVariant variant_from_name(std::string_view name) {
    if (name == "stein_adaptive") return SteinAdaptive{};
    if (name == "emppi") return Emppi{};
    if (name == "dro") return Dro{};
    if (name == "nominal_mpc") return NominalMpc{};
    throw ContractError("unknown controller variant '" + std::string(name) + "'");
}

void validate(const ControllerVariant& variant) {
    std::visit(overloaded{
                   [](const SteinAdaptive& s) {
                       if (!(s.gamma >= 0.0)) throw ContractError("stein gamma must be >= 0");
                       s.svgd.validate();
                       s.kernel.validate();
                   },
                   [](const Emppi&) {},
                   [](const Dro& d) {
                       if (!(d.epsilon >= 0.0)) throw ContractError("dro epsilon must be >= 0");
                   },
                   [](const NominalMpc&) {},
               },
               variant);
}

PlanObjective make_objective(const ControllerVariant& variant, const EnvModel& env,
                             const CostSpec& spec, const Vec& x0, const ParticleSet& particles,
                             const Vec& nominal) {
    return std::visit(
        overloaded{
            [&](const SteinAdaptive& s) -> PlanObjective {
                const Vec mean = particle_mean(particles);
                return [&env, &spec, x0, mean, thetas = rows_of(particles), gamma = s.gamma](const ControlPlan& p) {
                    std::vector<double> costs;
                    costs.reserve(thetas.size());
                    for (const Vec& th : thetas) costs.push_back(trajectory_cost(spec, env, x0, p, th));
                    return combine_robust(trajectory_cost(spec, env, x0, p, mean), costs, gamma);
                };
            },
            [&](const Emppi&) -> PlanObjective {
                return [&env, &spec, x0, thetas = rows_of(particles)](const ControlPlan& p) {
                    double total = 0.0;
                    for (const Vec& th : thetas) total += trajectory_cost(spec, env, x0, p, th);
                    return total / static_cast<double>(thetas.size());
                };
            },
            [&](const Dro& d) -> PlanObjective {
                if (!(d.lambda > 0.0)) throw ContractError("dro lambda must be > 0 when planning");
                return [&env, &spec, x0, thetas = rows_of(particles), d](const ControlPlan& p) {
                    std::vector<double> costs;
                    costs.reserve(thetas.size());
                    for (const Vec& th : thetas) costs.push_back(trajectory_cost(spec, env, x0, p, th));
                    return log_mean_exp_risk(costs, d.lambda, d.epsilon);
                };
            },
            [&](const NominalMpc&) -> PlanObjective {
                return [&env, &spec, x0, nominal](const ControlPlan& p) {
                    return trajectory_cost(spec, env, x0, p, nominal);
                };
            },
        },
        variant);
}

MppiResult plan(const ControllerVariant& variant, const EnvModel& env, const Vec& x0,
                const ParticleSet& particles, const Vec& nominal, const ControlPlan& warm,
                const CostSpec& spec, const MppiConfig& mppi, std::uint64_t seed) {
    const PlanObjective objective = make_objective(variant, env, spec, x0, particles, nominal);
    return mppi_solve(env, warm, objective, mppi, seed);
}

}  // namespace svmpc
