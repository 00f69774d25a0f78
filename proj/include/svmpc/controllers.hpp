#pragma once

#include "svmpc/cost.hpp"
#include "svmpc/kernels.hpp"
#include "svmpc/mppi.hpp"
#include "svmpc/svgd.hpp"

#include <string_view>
#include <variant>

namespace svmpc {

/// Gap-weighted robust objective over SVGD-adapted particles.
struct SteinAdaptive {
    double gamma = 0.5;
    SvgdConfig svgd;
    KernelSpec kernel;
};

/// Ensemble average over the initial prior draw.
struct Emppi {};

/// KL-ball risk-averse objective over the initial prior draw.
struct Dro {
    /// Temperature; a nonpositive value asks the harness to auto-calibrate it.
    double lambda = 0.0;
    double epsilon = 0.1;
};

/// Single nominal parameter estimate.
struct NominalMpc {};

using ControllerVariant = std::variant<SteinAdaptive, Emppi, Dro, NominalMpc>;

std::string_view variant_name(const ControllerVariant& variant);
ControllerVariant variant_from_name(std::string_view name);
void validate(const ControllerVariant& variant);

/// The plan-cost functional each variant minimizes from state x0.
PlanObjective make_objective(const ControllerVariant& variant, const EnvModel& env,
                             const CostSpec& spec, const Vec& x0, const ParticleSet& particles,
                             const Vec& nominal);

/// One planning cycle: mppi_solve on the variant's objective.
MppiResult plan(const ControllerVariant& variant, const EnvModel& env, const Vec& x0,
                const ParticleSet& particles, const Vec& nominal, const ControlPlan& warm,
                const CostSpec& spec, const MppiConfig& mppi, std::uint64_t seed);

}  // namespace svmpc
