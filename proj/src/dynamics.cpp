#include "svmpc/dynamics.hpp"

#include <cmath>
#include <string>

namespace svmpc {

namespace {

void require_dims(const Vec& x, int nx, const Vec& u, int nu, const Vec& theta, int np,
                  const char* who) {
    if (x.size() != nx || u.size() != nu || theta.size() != np) {
        throw ContractError(std::string(who) + ": dimension mismatch");
    }
}

void require_positive(double v, const char* what) {
    if (!(v > 0.0)) throw DomainError(std::string(what) + " must be positive");
}

}  // namespace

Vec cartpole_derivative(const Vec& x, const Vec& u, const Vec& theta) {
    using namespace cartpole;
    require_dims(x, kStateDim, u, 1, theta, 2, "cartpole_derivative");
    const double m = theta[0];
    const double l = theta[1];
    require_positive(m, "pole mass");
    require_positive(l, "pole length");

    const double s = std::sin(x[kPhi]);
    const double c = std::cos(x[kPhi]);
    const double w = x[kOmega];
    const double acc = (u[0] + m * s * (l * w * w + kGravity * c)) / (kCartMass + m * s * s);
    const double ang_acc = -(acc * c + kGravity * s) / l;

    Vec dx(kStateDim);
    dx << x[kV], w, acc, ang_acc;
    return dx;
}

Vec rocket2d_derivative(const Vec& x, const Vec& u, const Vec& theta) {
    using namespace rocket;
    require_dims(x, kStateDim, u, 2, theta, 3, "rocket2d_derivative");
    const double m = theta[0];
    const double inertia = theta[1];
    const double lever = theta[2];
    require_positive(m, "rocket mass");
    require_positive(inertia, "rocket inertia");
    if (!(lever > 0.0 && lever <= kHeight)) throw DomainError("COM offset must be in (0, h_rocket]");

    const double thrust = u[kThrust];
    const double gimbal = u[kGimbal];
    // Body-frame thrust (T sin(d), T cos(d)) rotated by phi into the world frame.
    const double heading = gimbal - x[kPhi];
    Vec dx(kStateDim);
    dx << x[kVx], x[kVy], x[kOmega], thrust * std::sin(heading) / m,
        thrust * std::cos(heading) / m - kGravity, thrust * std::sin(gimbal) * lever / inertia;
    return dx;
}

Vec racecar_derivative(const Vec& x, const Vec& u, const Vec& theta) {
    using namespace racecar;
    require_dims(x, kStateDim, u, 2, theta, 2, "racecar_derivative");
    const double m = theta[0];
    const double inertia = theta[1];
    require_positive(m, "car mass");
    require_positive(inertia, "car inertia");

    Vec dx(kStateDim);
    dx << x[kV] * std::cos(x[kPhi]), x[kV] * std::sin(x[kPhi]), x[kOmega],
        u[kThrottle] / m - kLinearDamping * x[kV], u[kSteer] / inertia - kAngularDamping * x[kOmega];
    return dx;
}

std::string_view to_string(EnvKind kind) {
    switch (kind) {
        case EnvKind::Cartpole: return "cartpole";
        case EnvKind::Rocket2d: return "rocket2d";
        case EnvKind::Racecar: return "racecar";
        case EnvKind::Custom: return "custom";
    }
    return "?";
}

EnvKind env_kind_from_string(std::string_view name) {
    if (name == "cartpole") return EnvKind::Cartpole;
    if (name == "rocket2d") return EnvKind::Rocket2d;
    if (name == "racecar") return EnvKind::Racecar;
    throw ContractError("unknown environment '" + std::string(name) + "'");
}

void EnvModel::validate() const {
    if (!(dt > 0.0)) throw ContractError("env dt must be > 0");
    if (state_dim < 1 || state_dim > kMaxDim || control_dim < 1 || control_dim > kMaxDim ||
        param_dim < 1 || param_dim > kMaxDim) {
        throw ContractError("env dimensions out of range");
    }
    if (static_cast<int>(control_bounds.size()) != control_dim) {
        throw ContractError("env control bounds dimension mismatch");
    }
    for (const auto& b : control_bounds) {
        if (!std::isfinite(b.lo) || !std::isfinite(b.hi) || !(b.lo < b.hi)) {
            throw ContractError("env control bounds must be finite with min < max");
        }
    }
    if (static_cast<int>(param_bounds.size()) != param_dim || true_params.size() != param_dim) {
        throw ContractError("env parameter dimension mismatch");
    }
    for (const auto& b : param_bounds) {
        if (!(b.lo <= b.hi)) throw ContractError("env parameter bounds must satisfy min <= max");
    }
    if (!inside(true_params, param_bounds)) {
        throw ContractError("env true parameters lie outside the parameter bounds");
    }
    if (kind == EnvKind::Custom && !custom) throw ContractError("custom env needs a derivative");
}

Vec EnvModel::derivative(const Vec& x, const Vec& u, const Vec& theta) const {
    switch (kind) {
        case EnvKind::Cartpole: return cartpole_derivative(x, u, theta);
        case EnvKind::Rocket2d: return rocket2d_derivative(x, u, theta);
        case EnvKind::Racecar: return racecar_derivative(x, u, theta);
        case EnvKind::Custom: return custom(x, u, theta);
    }
    throw ContractError("unknown environment kind");
}

EnvModel make_cartpole(double dt) {
    EnvModel env;
    env.kind = EnvKind::Cartpole;
    env.state_dim = cartpole::kStateDim;
    env.control_dim = 1;
    env.param_dim = 2;
    env.dt = dt;
    env.control_bounds = {{-10.0, 10.0}};
    env.true_params = Vec(2);
    env.true_params << 0.5, 0.75;
    env.param_bounds = {{0.3, 1.0}, {0.3, 1.0}};
    return env;
}

EnvModel make_rocket2d(double dt) {
    EnvModel env;
    env.kind = EnvKind::Rocket2d;
    env.state_dim = rocket::kStateDim;
    env.control_dim = 2;
    env.param_dim = 3;
    env.dt = dt;
    env.control_bounds = {{0.0, 5.0}, {-0.5, 0.5}};
    env.true_params = Vec(3);
    env.true_params << 0.1, 0.01, 0.7;
    env.param_bounds = {{0.05, 5.0}, {0.005, 2.0}, {0.05, rocket::kHeight}};
    return env;
}

EnvModel make_racecar(double dt) {
    EnvModel env;
    env.kind = EnvKind::Racecar;
    env.state_dim = racecar::kStateDim;
    env.control_dim = 2;
    env.param_dim = 2;
    env.dt = dt;
    env.control_bounds = {{-0.2, 0.5}, {-0.05, 0.05}};
    env.true_params = Vec(2);
    env.true_params << 0.1, 0.01;
    env.param_bounds = {{0.05, 0.3}, {0.00001, 0.5}};
    return env;
}

EnvModel make_env(EnvKind kind) {
    switch (kind) {
        case EnvKind::Cartpole: return make_cartpole();
        case EnvKind::Rocket2d: return make_rocket2d();
        case EnvKind::Racecar: return make_racecar();
        case EnvKind::Custom: break;
    }
    throw ContractError("make_env: custom environments have no defaults");
}

Vec step(const EnvModel& env, const Vec& x, const Vec& u, const Vec& theta) {
    const Vec uc = env.clamp_control(u);
    Vec next;
    switch (env.kind) {
        case EnvKind::Cartpole: next = rk4(cartpole_derivative, x, uc, theta, env.dt); break;
        case EnvKind::Rocket2d: next = rk4(rocket2d_derivative, x, uc, theta, env.dt); break;
        case EnvKind::Racecar: next = rk4(racecar_derivative, x, uc, theta, env.dt); break;
        case EnvKind::Custom: next = rk4(env.custom, x, uc, theta, env.dt); break;
    }
    if (!next.allFinite()) throw IntegrationError("integration produced a non-finite state");
    return next;
}

double cartpole_energy(const Vec& x, const Vec& theta) {
    using namespace cartpole;
    const double m = theta[0];
    const double l = theta[1];
    const double v = x[kV];
    const double w = x[kOmega];
    const double c = std::cos(x[kPhi]);
    return 0.5 * (kCartMass + m) * v * v + m * l * v * w * c + 0.5 * m * l * l * w * w -
           m * kGravity * l * c;
}

}  // namespace svmpc
