#include "svmpc/plan.hpp"

namespace svmpc {

ControlPlan ControlPlan::constant(int horizon, const Vec& u) {
    if (horizon < 0) throw ContractError("ControlPlan: negative horizon");
    Mat c(horizon, u.size());
    for (int t = 0; t < horizon; ++t) c.row(t) = u.transpose();
    return ControlPlan(std::move(c));
}

ControlPlan shift_warm_start(const ControlPlan& plan) {
    const int h = plan.horizon();
    if (h < 1) throw ContractError("shift_warm_start: empty plan");
    Mat next(h, plan.control_dim());
    if (h > 1) next.topRows(h - 1) = plan.controls.bottomRows(h - 1);
    next.row(h - 1) = plan.controls.row(h - 1);
    return ControlPlan(std::move(next));
}

}  // namespace svmpc
