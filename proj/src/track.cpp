#include "svmpc/track.hpp"

#include "svmpc/dynamics.hpp"

#include <cmath>
#include <numbers>

namespace svmpc {

namespace {
constexpr double kPi = std::numbers::pi;
}

double TrackGeometry::total_length() const {
    return 2.0 * straight_length + 2.0 * kPi * radius;
}

void TrackGeometry::validate() const {
    if (!(straight_length > 0.0) || !(radius > 0.0)) {
        throw ContractError("track straight length and radius must be > 0");
    }
    if (!(ref_speed > 0.0)) throw ContractError("track reference speed must be > 0");
}

TrackPoint track_point(const TrackGeometry& track, double s) {
    const double len = track.total_length();
    const double half = 0.5 * track.straight_length;
    const double r = track.radius;
    const double arc = kPi * r;
    s = std::fmod(s, len);
    if (s < 0.0) s += len;

    if (s < track.straight_length) return {-half + s, -r, 0.0, 0.0};
    s -= track.straight_length;
    if (s < arc) {
        const double a = -0.5 * kPi + s / r;
        return {half + r * std::cos(a), r * std::sin(a), a + 0.5 * kPi, 1.0 / r};
    }
    s -= arc;
    if (s < track.straight_length) return {half - s, r, kPi, 0.0};
    s -= track.straight_length;
    const double a = 0.5 * kPi + s / r;
    return {-half + r * std::cos(a), r * std::sin(a), a + 0.5 * kPi, 1.0 / r};
}

Vec track_reference(const TrackGeometry& track, double s) {
    const TrackPoint p = track_point(track, s);
    Vec ref(racecar::kStateDim);
    ref << p.x, p.y, p.heading, track.ref_speed, track.ref_speed * p.curvature;
    return ref;
}

double track_project(const TrackGeometry& track, double x, double y) {
    const double half = 0.5 * track.straight_length;
    const double r = track.radius;
    const double len = track.total_length();
    double s = 0.0;
    if (x >= -half && x <= half) {
        s = y < 0.0 ? x + half : track.straight_length + kPi * r + (half - x);
    } else if (x > half) {
        const double a = std::atan2(y, x - half);  // [-pi/2, pi/2] on this side
        s = track.straight_length + r * (a + 0.5 * kPi);
    } else {
        double a = std::atan2(y, x + half);
        if (a < 0.5 * kPi) a += 2.0 * kPi;  // map into [pi/2, 3pi/2]
        s = 2.0 * track.straight_length + kPi * r + r * (a - 0.5 * kPi);
    }
    s = std::fmod(s, len);
    return s < 0.0 ? s + len : s;
}

double ProgressTracker::update(const Vec& state) {
    const double frac =
        track_project(track_, state[racecar::kX], state[racecar::kY]) / track_.total_length();
    if (started_) {
        const double delta = frac - last_fraction_;
        if (delta < -0.5) ++laps_;
        if (delta > 0.5) --laps_;
    }
    started_ = true;
    last_fraction_ = frac;
    progress_ = laps_ + frac;
    return progress_;
}

double track_progress(const TrackGeometry& track, std::span<const Vec> history) {
    ProgressTracker tracker(track);
    for (const Vec& x : history) tracker.update(x);
    return tracker.progress();
}

}  // namespace svmpc
