#pragma once

#include "svmpc/common.hpp"
#include "svmpc/kernels.hpp"

#include <functional>
#include <random>
#include <string_view>

namespace svmpc {

/// N parameter hypotheses (one per row) constrained to a box.
///
/// Every public constructor and mutation leaves all particles finite and inside
/// the box; out-of-box coordinates are clamped, non-finite ones are rejected.
class ParticleSet {
public:
    ParticleSet(Mat particles, Box bounds);

    static ParticleSet sample_uniform(const Box& bounds, int count, std::mt19937_64& rng);

    int size() const { return static_cast<int>(particles_.rows()); }
    int dim() const { return static_cast<int>(particles_.cols()); }

    Vec particle(int i) const { return particles_.row(i).transpose(); }
    void set_particle(int i, const Vec& theta);

    const Mat& matrix() const { return particles_; }
    const Box& bounds() const { return bounds_; }

    bool operator==(const ParticleSet& other) const = default;

private:
    Mat particles_;
    Box bounds_;
};

/// Coordinate-wise arithmetic mean of the particles.
Vec particle_mean(const ParticleSet& particles);

enum class SignMode {
    Adversarial,  // log p'(theta) = +deltaL(theta) + log p(theta)
    Favoring,     // log p'(theta) = -deltaL(theta) + log p(theta)
};

std::string_view to_string(SignMode mode);
SignMode sign_mode_from_string(std::string_view name);

struct SvgdConfig {
    double step_size = 1e-3;
    int inner_iterations = 1;
    /// Finite-difference step as a fraction of each coordinate's prior width.
    double fd_epsilon = 1e-4;
    SignMode sign_mode = SignMode::Adversarial;

    void validate() const;
};

/// Boltzmann posterior over parameters: exp(+-gap(theta)) times a box-uniform prior.
struct PosteriorModel {
    std::function<double(const Vec&)> gap_score;
    Box support;
};

/// Gradient of the log posterior at theta; the gap gradient is taken by
/// central differences (one-sided where the stencil would leave the support).
Vec posterior_score(const Vec& theta, const PosteriorModel& model, const SvgdConfig& config);

/// One SVGD iteration. The input is never modified; on error nothing is returned.
///
/// With the constant kernel each particle follows its own score (parallel
/// gradient ascent) rather than the ensemble-averaged score.
ParticleSet svgd_step(const ParticleSet& particles, const PosteriorModel& model,
                      const KernelSpec& kernel, const SvgdConfig& config);

/// Squared kernel Stein discrepancy, V-statistic form. Diagnostic only.
double ksd_estimate(const ParticleSet& particles, const PosteriorModel& model,
                    const KernelSpec& kernel, const SvgdConfig& config = {});

}  // namespace svmpc
