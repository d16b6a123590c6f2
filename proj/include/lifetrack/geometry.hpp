#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace lifetrack {

struct Waypoint {
    double x = 0.0;
    double y = 0.0;
};

struct Pose2D {
    double x = 0.0;
    double y = 0.0;
    double psi = 0.0;  // normalized to (-pi, pi]
};

// Preview point expressed in the vehicle body frame: forward positive x,
// left positive y.
struct PreviewPoint {
    double x_ref = 0.0;
    double y_ref = 0.0;
};

struct PathPoint {
    double x = 0.0;
    double y = 0.0;
    double s = 0.0;      // arc length from path start
    double psi = 0.0;    // tangent heading, unwrapped (continuous)
    double kappa = 0.0;  // signed curvature
};

// Densely resampled reference curve with uniform arc-length spacing.
class ReferencePath {
public:
    ReferencePath() = default;
    ReferencePath(std::vector<PathPoint> points, double ds);

    const std::vector<PathPoint>& points() const { return points_; }
    double ds() const { return ds_; }
    double length() const { return points_.empty() ? 0.0 : points_.back().s; }
    double kappa_max() const { return kappa_max_; }
    bool empty() const { return points_.empty(); }
    std::size_t size() const { return points_.size(); }

    // Point at arc length s, linearly interpolated between samples and
    // clamped to the path ends.
    PathPoint at_arc_length(double s) const;

private:
    std::vector<PathPoint> points_;
    double ds_ = 0.0;
    double kappa_max_ = 0.0;
};

struct ProjectionResult {
    double s_star = 0.0;   // arc length of nearest path point
    double e_lat = 0.0;    // signed lateral offset, positive left of tangent
    double e_psi = 0.0;    // heading error (pose overload only)
};

struct CurvatureSegment {
    double length = 0.0;  // m
    double kappa = 0.0;   // 1/m
};

struct TrackSpec {
    std::uint64_t seed = 0;
    double length = 0.0;
    std::vector<CurvatureSegment> curvature_profile;
    std::string section_id;
    double perturb_amplitude = 0.0;  // 1/m, seeded curvature ripple
};

double normalize_angle(double a);

// Natural cubic spline through the waypoints, resampled at uniform
// arc-length spacing ds. Throws TooFewWaypoints / DegenerateSegment.
ReferencePath build_path(const std::vector<Waypoint>& waypoints, double ds);

ProjectionResult project_to_path(const ReferencePath& path, double x, double y);
ProjectionResult project_to_path(const ReferencePath& path, const Pose2D& pose);

// Point at s_star(pose) + lookahead, in the body frame of pose.
// Throws PathExhausted when the pose has already reached the final sample.
PreviewPoint preview_point(const ReferencePath& path, const Pose2D& pose, double lookahead);

std::vector<Waypoint> generate_track(const TrackSpec& spec);

// Built-in sections. S1 has the richest curvature and is held out for
// closed-loop testing; S2 and S3 are easier training sections.
TrackSpec track_preset(const std::string& section_id);

// key = value serialization of a TrackSpec (curvature profile flattened as
// comma-separated "length:kappa" pairs).
std::string track_spec_to_config(const TrackSpec& spec);
TrackSpec track_spec_from_config(const std::string& text);

void write_waypoints_csv(const std::string& file, const std::vector<Waypoint>& wps);

}  // namespace lifetrack
