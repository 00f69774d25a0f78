#pragma once

#include "svmpc/common.hpp"

#include <string_view>

namespace svmpc {

enum class KernelKind { Rbf, Imq, Constant };

/// Positive definite kernel over parameter space.
///
///   RBF:      k(a, b) = exp(-|a - b|^2 / h)
///   IMQ:      k(a, b) = (psi^2 + |a - b|^2)^(-zeta)
///   Constant: k(a, b) = 1
struct KernelSpec {
    KernelKind kind = KernelKind::Rbf;
    double bandwidth = 1.0;  // h for RBF, psi for IMQ
    double decay = 0.5;      // zeta, IMQ only

    static KernelSpec rbf(double h = 1.0) { return {KernelKind::Rbf, h, 0.5}; }
    static KernelSpec imq(double psi = 1.0, double zeta = 0.5) { return {KernelKind::Imq, psi, zeta}; }
    static KernelSpec constant() { return {KernelKind::Constant, 1.0, 0.5}; }

    void validate() const;
    bool differentiable() const { return kind != KernelKind::Constant; }
};

std::string_view to_string(KernelKind kind);
KernelKind kernel_kind_from_string(std::string_view name);

double kernel_eval(const KernelSpec& kernel, const Vec& a, const Vec& b);

/// Gradient of k(a, b) with respect to the first argument.
Vec kernel_grad(const KernelSpec& kernel, const Vec& a, const Vec& b);

/// trace(d^2 k / da db); the last term of the Stein kernel.
double kernel_mixed_trace(const KernelSpec& kernel, const Vec& a, const Vec& b);

}  // namespace svmpc
