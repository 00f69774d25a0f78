#include "svmpc/common.hpp"

#include <cmath>
#include <numbers>

namespace svmpc {

Vec clamp_to(const Vec& v, const Box& box) {
    if (static_cast<std::size_t>(v.size()) != box.size()) {
        throw ContractError("clamp_to: dimension mismatch");
    }
    Vec out(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) out[i] = box[i].clamp(v[i]);
    return out;
}

bool inside(const Vec& v, const Box& box) {
    if (static_cast<std::size_t>(v.size()) != box.size()) return false;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (!box[i].contains(v[i])) return false;
    }
    return true;
}

Vec box_midpoint(const Box& box) {
    Vec out(static_cast<Eigen::Index>(box.size()));
    for (std::size_t i = 0; i < box.size(); ++i) out[static_cast<Eigen::Index>(i)] = box[i].mid();
    return out;
}

double wrap_angle(double a) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double w = std::fmod(a + std::numbers::pi, two_pi);
    if (w <= 0.0) w += two_pi;
    return w - std::numbers::pi;
}

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
    std::uint64_t z = a + 0x9E3779B97F4A7C15ULL * (b + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace svmpc
