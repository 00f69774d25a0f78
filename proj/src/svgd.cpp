#include "svmpc/svgd.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

namespace svmpc {

namespace {

double evaluate_gap(const PosteriorModel& model, const Vec& theta) {
    const double v = model.gap_score(theta);
    if (std::isnan(v)) {
        std::ostringstream os;
        os << "gap score is NaN at theta = [" << theta.transpose() << "]";
        throw EvaluationError(os.str(), theta);
    }
    return v;
}

std::vector<Vec> all_scores(const ParticleSet& particles, const PosteriorModel& model,
                            const SvgdConfig& config) {
    std::vector<Vec> scores;
    scores.reserve(static_cast<std::size_t>(particles.size()));
    for (int i = 0; i < particles.size(); ++i) {
        scores.push_back(posterior_score(particles.particle(i), model, config));
    }
    return scores;
}

}  // namespace

ParticleSet::ParticleSet(Mat particles, Box bounds)
    : particles_(std::move(particles)), bounds_(std::move(bounds)) {
    if (particles_.rows() < 1 || particles_.cols() < 1) {
        throw ContractError("ParticleSet: need at least one particle of dimension >= 1");
    }
    if (particles_.cols() > kMaxDim) throw ContractError("ParticleSet: dimension exceeds kMaxDim");
    if (static_cast<Eigen::Index>(bounds_.size()) != particles_.cols()) {
        throw ContractError("ParticleSet: bounds dimension mismatch");
    }
    for (const auto& b : bounds_) {
        if (!(b.lo <= b.hi)) throw ContractError("ParticleSet: empty bound interval");
    }
    if (!particles_.allFinite()) throw ContractError("ParticleSet: non-finite particle");
    for (Eigen::Index i = 0; i < particles_.rows(); ++i) {
        for (Eigen::Index j = 0; j < particles_.cols(); ++j) {
            particles_(i, j) = bounds_[static_cast<std::size_t>(j)].clamp(particles_(i, j));
        }
    }
}

ParticleSet ParticleSet::sample_uniform(const Box& bounds, int count, std::mt19937_64& rng) {
    if (count < 1) throw ContractError("ParticleSet: count must be >= 1");
    Mat p(count, static_cast<Eigen::Index>(bounds.size()));
    for (int i = 0; i < count; ++i) {
        for (std::size_t j = 0; j < bounds.size(); ++j) {
            std::uniform_real_distribution<double> dist(bounds[j].lo, bounds[j].hi);
            p(i, static_cast<Eigen::Index>(j)) = dist(rng);
        }
    }
    return ParticleSet(std::move(p), bounds);
}

void ParticleSet::set_particle(int i, const Vec& theta) {
    if (theta.size() != particles_.cols()) throw ContractError("set_particle: dimension mismatch");
    if (!theta.allFinite()) throw ContractError("set_particle: non-finite particle");
    particles_.row(i) = clamp_to(theta, bounds_).transpose();
}

Vec particle_mean(const ParticleSet& particles) {
    return particles.matrix().colwise().mean().transpose();
}

std::string_view to_string(SignMode mode) {
    return mode == SignMode::Adversarial ? "adversarial" : "favoring";
}

SignMode sign_mode_from_string(std::string_view name) {
    if (name == "adversarial") return SignMode::Adversarial;
    if (name == "favoring") return SignMode::Favoring;
    throw ContractError("unknown sign mode '" + std::string(name) + "'");
}

void SvgdConfig::validate() const {
    if (!(step_size >= 0.0)) throw ContractError("svgd step size must be >= 0");
    if (inner_iterations < 1) throw ContractError("svgd iterations must be >= 1");
    if (!(fd_epsilon > 0.0)) throw ContractError("svgd fd_epsilon must be > 0");
}

Vec posterior_score(const Vec& theta, const PosteriorModel& model, const SvgdConfig& config) {
    if (static_cast<std::size_t>(theta.size()) != model.support.size()) {
        throw ContractError("posterior_score: dimension mismatch");
    }
    const Vec center = clamp_to(theta, model.support);
    const double sign = config.sign_mode == SignMode::Adversarial ? 1.0 : -1.0;
    Vec grad = Vec::Zero(center.size());
    for (Eigen::Index j = 0; j < center.size(); ++j) {
        const Interval& range = model.support[static_cast<std::size_t>(j)];
        const double h = config.fd_epsilon * range.width();
        if (!(h > 0.0)) continue;
        Vec lo = center;
        Vec hi = center;
        lo[j] = std::max(center[j] - h, range.lo);
        hi[j] = std::min(center[j] + h, range.hi);
        grad[j] = (evaluate_gap(model, hi) - evaluate_gap(model, lo)) / (hi[j] - lo[j]);
    }
    // The uniform prior contributes no gradient inside its support.
    return sign * grad;
}

ParticleSet svgd_step(const ParticleSet& particles, const PosteriorModel& model,
                      const KernelSpec& kernel, const SvgdConfig& config) {
    kernel.validate();
    config.validate();
    const std::vector<Vec> scores = all_scores(particles, model, config);
    const int n = particles.size();

    Mat next = particles.matrix();
    if (kernel.kind == KernelKind::Constant) {
        for (int i = 0; i < n; ++i) {
            const Vec theta = particles.particle(i);
            next.row(i) = (theta + config.step_size * scores[static_cast<std::size_t>(i)]).transpose();
        }
        return ParticleSet(std::move(next), particles.bounds());
    }

    const double inv_n = 1.0 / static_cast<double>(n);
    for (int i = 0; i < n; ++i) {
        const Vec target = particles.particle(i);
        Vec phi = Vec::Zero(target.size());
        for (int j = 0; j < n; ++j) {
            const Vec source = particles.particle(j);
            phi += kernel_eval(kernel, source, target) * scores[static_cast<std::size_t>(j)] +
                   kernel_grad(kernel, source, target);
        }
        next.row(i) = (target + config.step_size * (inv_n * phi)).transpose();
    }
    return ParticleSet(std::move(next), particles.bounds());
}

double ksd_estimate(const ParticleSet& particles, const PosteriorModel& model,
                    const KernelSpec& kernel, const SvgdConfig& config) {
    if (!kernel.differentiable()) {
        throw ContractError("ksd_estimate: constant kernel gives a degenerate Stein kernel");
    }
    kernel.validate();
    const std::vector<Vec> scores = all_scores(particles, model, config);
    const int n = particles.size();
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        const Vec a = particles.particle(i);
        const Vec& sa = scores[static_cast<std::size_t>(i)];
        for (int j = 0; j < n; ++j) {
            const Vec b = particles.particle(j);
            const Vec& sb = scores[static_cast<std::size_t>(j)];
            const double k = kernel_eval(kernel, a, b);
            const Vec grad_a = kernel_grad(kernel, a, b);
            const Vec grad_b = kernel_grad(kernel, b, a);
            total += k * sa.dot(sb) + sa.dot(grad_b) + sb.dot(grad_a) +
                     kernel_mixed_trace(kernel, a, b);
        }
    }
    return std::max(total / (static_cast<double>(n) * n), 0.0);
}

}  // namespace svmpc
