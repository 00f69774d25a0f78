#pragma once

#include "svmpc/common.hpp"

#include <span>

namespace svmpc {

/// Stadium-shaped closed track centered at the origin, driven counter-clockwise.
///
/// Arc length 0 is the left end of the bottom straight, (-L/2, -R), heading +x.
/// The centerline visits: bottom straight, right semicircle, top straight, left
/// semicircle.
struct TrackGeometry {
    double straight_length = 5.0;
    double radius = 2.0;
    double ref_speed = 2.0;

    double total_length() const;
    void validate() const;
};

struct TrackPoint {
    double x = 0.0;
    double y = 0.0;
    double heading = 0.0;    // in [0, 2 pi)
    double curvature = 0.0;  // 0 on straights, 1/R on arcs
};

TrackPoint track_point(const TrackGeometry& track, double s);

/// Reference race car state [x, y, heading, v_ref, omega_ref] at arc length s (mod length).
Vec track_reference(const TrackGeometry& track, double s);

/// Arc length in [0, total_length) of the centerline point nearest (x, y).
double track_project(const TrackGeometry& track, double x, double y);

/// Unwraps nearest-point arc length into monotone lap progress across calls
/// within one trial; a completed lap reads >= 1.
class ProgressTracker {
public:
    explicit ProgressTracker(TrackGeometry track) : track_(track) {}

    double update(const Vec& state);
    double progress() const { return progress_; }

private:
    TrackGeometry track_;
    bool started_ = false;
    int laps_ = 0;
    double last_fraction_ = 0.0;
    double progress_ = 0.0;
};

/// Progress of the last state after unwrapping the whole history.
double track_progress(const TrackGeometry& track, std::span<const Vec> history);

}  // namespace svmpc
