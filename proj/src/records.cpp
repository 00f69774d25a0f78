#include "svmpc/records.hpp"

#include "detail/json_text.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#ifndef SVMPC_VERSION
#define SVMPC_VERSION "unknown"
#endif

namespace svmpc {

using detail::OJson;

std::string_view software_version() { return SVMPC_VERSION; }

std::string format_number(double v) { return detail::format_double(v); }

std::string trajectory_csv(const TrialResult& result) {
    std::string out = "t";
    if (result.log.empty()) {
        out += "\n";
        return out;
    }
    const auto& first = result.log.front();
    for (Eigen::Index i = 0; i < first.state.size(); ++i) out += ",state_" + std::to_string(i);
    for (Eigen::Index i = 0; i < first.control.size(); ++i) out += ",control_" + std::to_string(i);
    out += ",cost";
    for (Eigen::Index i = 0; i < first.particles.rows(); ++i) {
        for (Eigen::Index j = 0; j < first.particles.cols(); ++j) {
            out += ",particle_" + std::to_string(i) + "_" + std::to_string(j);
        }
    }
    out += "\n";
    for (const auto& rec : result.log) {
        out += format_number(rec.t);
        for (Eigen::Index i = 0; i < rec.state.size(); ++i) out += "," + format_number(rec.state[i]);
        for (Eigen::Index i = 0; i < rec.control.size(); ++i) out += "," + format_number(rec.control[i]);
        out += "," + format_number(rec.cost);
        for (Eigen::Index i = 0; i < rec.particles.rows(); ++i) {
            for (Eigen::Index j = 0; j < rec.particles.cols(); ++j) {
                out += "," + format_number(rec.particles(i, j));
            }
        }
        out += "\n";
    }
    return out;
}

namespace {

OJson vec_json(const Vec& v) {
    OJson a = OJson::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

OJson mat_json(const Mat& m) {
    OJson a = OJson::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) a.push_back(vec_json(m.row(i).transpose()));
    return a;
}

}  // namespace

std::string trial_summary_json(const TrialResult& result, const ExperimentConfig& config,
                               std::string_view variant, std::uint64_t seed) {
    OJson j;
    j["software_version"] = std::string(software_version());
    j["config_hash"] = hash_hex(config_hash(config));
    j["env"] = std::string(config.env_name());
    j["variant"] = std::string(variant);
    j["seed"] = seed;
    j["success"] = result.success;
    j["completion_time"] = result.completion_time;
    j["terminal_reason"] = std::string(to_string(result.reason));
    j["message"] = result.message;
    j["steps"] = result.log.size();
    j["final_state"] = vec_json(result.final_state);
    j["initial_particles"] = mat_json(result.initial_particles);
    j["final_particles"] = result.log.empty() ? mat_json(result.initial_particles)
                                              : mat_json(result.log.back().particles);
    return detail::pretty_json(j, true);
}

std::string aggregate_csv_header() {
    return "method,env,success_pct,mean_time,std_time,trials,successes,mean_time_all,std_time_all\n";
}

std::string aggregate_csv_row(std::string_view method, std::string_view env, const BatchStats& s) {
    std::string out(method);
    out += ",";
    out += env;
    for (double v : {s.success_pct, s.mean_time, s.std_time}) out += "," + format_number(v);
    out += "," + std::to_string(s.trials) + "," + std::to_string(s.successes);
    for (double v : {s.mean_time_all, s.std_time_all}) out += "," + format_number(v);
    out += "\n";
    return out;
}

std::vector<double> progress_series(const TrialResult& result, const TrackGeometry& track, long steps) {
    ProgressTracker tracker(track);
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(steps + 1));
    for (const Vec& x : result.state_history()) {
        if (static_cast<long>(out.size()) > steps) break;
        const double p = tracker.update(x);
        out.push_back(out.empty() ? p : std::max(out.back(), p));
    }
    while (static_cast<long>(out.size()) <= steps) out.push_back(out.back());
    return out;
}

ProgressBand progress_band(std::span<const TrialResult> results, const TrackGeometry& track, double dt,
                           long steps) {
    if (results.empty()) throw ContractError("progress_band: no trials");
    std::vector<std::vector<double>> series;
    for (const auto& r : results) series.push_back(progress_series(r, track, steps));
    ProgressBand band;
    const double n = static_cast<double>(series.size());
    for (long k = 0; k <= steps; ++k) {
        const auto idx = static_cast<std::size_t>(k);
        double mean = 0.0;
        for (const auto& s : series) mean += s[idx];
        mean /= n;
        double ss = 0.0;
        for (const auto& s : series) ss += (s[idx] - mean) * (s[idx] - mean);
        band.t.push_back(static_cast<double>(k) * dt);
        band.mean.push_back(mean);
        band.std.push_back(series.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0);
    }
    return band;
}

double best_completion_time(std::span<const TrialResult> results) {
    double best = std::numeric_limits<double>::quiet_NaN();
    for (const auto& r : results) {
        if (r.success && !(r.completion_time >= best)) best = r.completion_time;
    }
    return best;
}

}  // namespace svmpc
