#pragma once

#include "svmpc/common.hpp"

#include <functional>
#include <string>
#include <string_view>

namespace svmpc {

// State layouts. Angles in rad, lengths in m, velocities per second.
namespace cartpole {
enum Index : int { kX = 0, kPhi, kV, kOmega, kStateDim };  // phi = 0 hangs down
inline constexpr double kCartMass = 1.0;
inline constexpr double kGravity = 9.81;
}  // namespace cartpole

namespace rocket {
enum Index : int { kX = 0, kY, kPhi, kVx, kVy, kOmega, kStateDim };  // phi = 0 upright
enum Control : int { kThrust = 0, kGimbal };
inline constexpr double kGravity = 9.81;
inline constexpr double kHeight = 1.0;
}  // namespace rocket

namespace racecar {
enum Index : int { kX = 0, kY, kPhi, kV, kOmega, kStateDim };
enum Control : int { kThrottle = 0, kSteer };
inline constexpr double kLinearDamping = 0.1;
inline constexpr double kAngularDamping = 0.1;
}  // namespace racecar

/// Frictionless cart with a point-mass pole; theta = [pole mass, pole length].
Vec cartpole_derivative(const Vec& x, const Vec& u, const Vec& theta);

/// Planar rigid rocket with a gimbaled thruster at its base;
/// u = [thrust, gimbal], theta = [mass, inertia, base-to-COM distance].
Vec rocket2d_derivative(const Vec& x, const Vec& u, const Vec& theta);

/// Dynamic unicycle with linear damping; u = [throttle, steer], theta = [mass, inertia].
Vec racecar_derivative(const Vec& x, const Vec& u, const Vec& theta);

enum class EnvKind { Cartpole, Rocket2d, Racecar, Custom };

std::string_view to_string(EnvKind kind);
EnvKind env_kind_from_string(std::string_view name);

using DerivativeFn = std::function<Vec(const Vec& x, const Vec& u, const Vec& theta)>;

struct EnvModel {
    EnvKind kind = EnvKind::Custom;
    int state_dim = 0;
    int control_dim = 0;
    int param_dim = 0;
    double dt = 0.0;
    Box control_bounds;
    Vec true_params;
    Box param_bounds;
    /// Used only when kind == Custom.
    DerivativeFn custom;

    void validate() const;
    Vec derivative(const Vec& x, const Vec& u, const Vec& theta) const;
    Vec clamp_control(const Vec& u) const { return clamp_to(u, control_bounds); }
};

EnvModel make_cartpole(double dt = 0.02);
EnvModel make_rocket2d(double dt = 0.015);
EnvModel make_racecar(double dt = 0.02);
EnvModel make_env(EnvKind kind);

/// Classic fourth-order Runge-Kutta step of xdot = f(x, u, theta) with u held constant.
template <typename F>
Vec rk4(const F& f, const Vec& x, const Vec& u, const Vec& theta, double dt) {
    const Vec k1 = f(x, u, theta);
    const Vec k2 = f(x + 0.5 * dt * k1, u, theta);
    const Vec k3 = f(x + 0.5 * dt * k2, u, theta);
    const Vec k4 = f(x + dt * k3, u, theta);
    return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

/// Advances the environment by one dt. The control is clamped to the
/// environment's bounds before integration.
Vec step(const EnvModel& env, const Vec& x, const Vec& u, const Vec& theta);

/// Total mechanical energy of the cartpole (potential zero at the pivot height).
double cartpole_energy(const Vec& x, const Vec& theta);

}  // namespace svmpc
