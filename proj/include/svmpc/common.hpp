#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace svmpc {

/// Largest state, control or parameter dimension handled by the library.
/// Vectors are stack allocated up to this size so rollouts never touch the heap.
inline constexpr int kMaxDim = 8;

using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDim, 1>;
using Mat = Eigen::MatrixXd;

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double clamp(double v) const { return v < lo ? lo : (v > hi ? hi : v); }
    double mid() const { return 0.5 * (lo + hi); }
    double width() const { return hi - lo; }
    bool contains(double v) const { return v >= lo && v <= hi; }
    bool operator==(const Interval&) const = default;
};

using Box = std::vector<Interval>;

Vec clamp_to(const Vec& v, const Box& box);
bool inside(const Vec& v, const Box& box);
Vec box_midpoint(const Box& box);

/// Wraps an angle into (-pi, pi].
double wrap_angle(double a);

/// Violated precondition (bad dimensions, invalid parameters).
class ContractError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Physical parameter outside the model's domain (e.g. nonpositive mass).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Non-finite state produced by the integrator.
class IntegrationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A posterior potential evaluated to NaN; carries the offending parameter.
class EvaluationError : public std::runtime_error {
public:
    EvaluationError(const std::string& what, Vec theta)
        : std::runtime_error(what), theta_(std::move(theta)) {}
    const Vec& theta() const { return theta_; }

private:
    Vec theta_;
};

class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// SplitMix64 finalizer; used to derive independent substream seeds.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b = 0);

}  // namespace svmpc
