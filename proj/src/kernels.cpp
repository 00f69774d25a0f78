#include "svmpc/kernels.hpp"

#include <cmath>
#include <string>

namespace svmpc {

namespace {

void check_dims(const Vec& a, const Vec& b) {
    if (a.size() != b.size() || a.size() == 0) {
        throw ContractError("kernel: dimension mismatch (" + std::to_string(a.size()) + " vs " +
                            std::to_string(b.size()) + ")");
    }
}

}  // namespace

void KernelSpec::validate() const {
    switch (kind) {
        case KernelKind::Rbf:
            if (!(bandwidth > 0.0)) throw ContractError("RBF bandwidth must be > 0");
            break;
        case KernelKind::Imq:
            if (!(bandwidth > 0.0)) throw ContractError("IMQ bandwidth psi must be > 0");
            if (!(decay > 0.0)) throw ContractError("IMQ decay zeta must be > 0");
            break;
        case KernelKind::Constant:
            break;
    }
}

std::string_view to_string(KernelKind kind) {
    switch (kind) {
        case KernelKind::Rbf: return "rbf";
        case KernelKind::Imq: return "imq";
        case KernelKind::Constant: return "constant";
    }
    return "?";
}

KernelKind kernel_kind_from_string(std::string_view name) {
    if (name == "rbf") return KernelKind::Rbf;
    if (name == "imq") return KernelKind::Imq;
    if (name == "constant") return KernelKind::Constant;
    throw ContractError("unknown kernel '" + std::string(name) + "'");
}

double kernel_eval(const KernelSpec& kernel, const Vec& a, const Vec& b) {
    check_dims(a, b);
    const double r2 = (a - b).squaredNorm();
    switch (kernel.kind) {
        case KernelKind::Rbf: return std::exp(-r2 / kernel.bandwidth);
        case KernelKind::Imq:
            return std::pow(kernel.bandwidth * kernel.bandwidth + r2, -kernel.decay);
        case KernelKind::Constant: return 1.0;
    }
    return 0.0;
}

Vec kernel_grad(const KernelSpec& kernel, const Vec& a, const Vec& b) {
    check_dims(a, b);
    const Vec diff = a - b;
    const double r2 = diff.squaredNorm();
    switch (kernel.kind) {
        case KernelKind::Rbf: {
            const double k = std::exp(-r2 / kernel.bandwidth);
            return (-2.0 / kernel.bandwidth * k) * diff;
        }
        case KernelKind::Imq: {
            const double base = kernel.bandwidth * kernel.bandwidth + r2;
            return (-2.0 * kernel.decay * std::pow(base, -kernel.decay - 1.0)) * diff;
        }
        case KernelKind::Constant: return Vec::Zero(a.size());
    }
    return Vec::Zero(a.size());
}

double kernel_mixed_trace(const KernelSpec& kernel, const Vec& a, const Vec& b) {
    check_dims(a, b);
    const double r2 = (a - b).squaredNorm();
    const auto d = static_cast<double>(a.size());
    switch (kernel.kind) {
        case KernelKind::Rbf: {
            const double h = kernel.bandwidth;
            const double k = std::exp(-r2 / h);
            return (2.0 * d / h - 4.0 * r2 / (h * h)) * k;
        }
        case KernelKind::Imq: {
            const double z = kernel.decay;
            const double base = kernel.bandwidth * kernel.bandwidth + r2;
            return 2.0 * z * d * std::pow(base, -z - 1.0) -
                   4.0 * z * (z + 1.0) * r2 * std::pow(base, -z - 2.0);
        }
        case KernelKind::Constant: return 0.0;
    }
    return 0.0;
}

}  // namespace svmpc
