#pragma once

#include "svmpc/common.hpp"

namespace svmpc {

/// Horizon-length open-loop control sequence; row t is the control applied at step t.
struct ControlPlan {
    Mat controls;

    ControlPlan() = default;
    explicit ControlPlan(Mat c) : controls(std::move(c)) {}

    /// H copies of the control u.
    static ControlPlan constant(int horizon, const Vec& u);

    int horizon() const { return static_cast<int>(controls.rows()); }
    int control_dim() const { return static_cast<int>(controls.cols()); }
    Vec control(int t) const { return controls.row(t).transpose(); }

    bool operator==(const ControlPlan& other) const { return controls == other.controls; }
};

/// Drops the first control and repeats the last one.
ControlPlan shift_warm_start(const ControlPlan& plan);

}  // namespace svmpc
