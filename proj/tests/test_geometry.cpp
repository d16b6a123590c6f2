#include <doctest.h>

#include <cmath>

#include "lifetrack/errors.hpp"
#include "lifetrack/geometry.hpp"
#include "lifetrack/rng.hpp"

using namespace lifetrack;

namespace {

std::vector<Waypoint> circle_waypoints(double radius, int n, double arc = 2.0 * 3.14159265358979) {
    std::vector<Waypoint> wps;
    for (int i = 0; i <= n; ++i) {
        double a = arc * i / n;
        wps.push_back({radius * std::sin(a), radius * (1.0 - std::cos(a))});
    }
    return wps;
}

std::vector<Waypoint> straight_waypoints(double length, int n) {
    std::vector<Waypoint> wps;
    for (int i = 0; i <= n; ++i) wps.push_back({length * i / n, 0.0});
    return wps;
}

}  // namespace

TEST_CASE("build_path: collinear waypoints give zero heading and curvature") {
    ReferencePath path = build_path(straight_waypoints(20.0, 10), 0.1);
    for (const auto& p : path.points()) {
        CHECK(std::abs(p.psi) < 1e-9);
        CHECK(std::abs(p.kappa) < 1e-9);
    }
}

TEST_CASE("build_path: circle of radius 20 recovers kappa = 0.05") {
    ReferencePath path = build_path(circle_waypoints(20.0, 72), 0.1);
    // skip the natural-spline end regions
    const auto& pts = path.points();
    for (std::size_t i = pts.size() / 10; i < pts.size() * 9 / 10; ++i)
        CHECK(pts[i].kappa == doctest::Approx(0.05).epsilon(0.01));
}

TEST_CASE("build_path: fewer than 4 waypoints rejected") {
    std::vector<Waypoint> wps = {{0, 0}, {1, 0}, {2, 0}};
    CHECK_THROWS_AS(build_path(wps, 0.1), TooFewWaypoints);
}

TEST_CASE("build_path: duplicate consecutive waypoints rejected") {
    std::vector<Waypoint> wps = {{0, 0}, {1, 0}, {1, 0}, {2, 0}, {3, 0}};
    CHECK_THROWS_AS(build_path(wps, 0.1), DegenerateSegment);
}

TEST_CASE("build_path: arc length monotone with uniform spacing") {
    ReferencePath path = build_path(circle_waypoints(30.0, 60, 2.0), 0.1);
    const auto& pts = path.points();
    CHECK(pts[0].s == 0.0);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        CHECK(pts[i + 1].s - pts[i].s == doctest::Approx(0.1).epsilon(1e-9));
    // heading continuity after unwrapping
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        CHECK(std::abs(pts[i + 1].psi - pts[i].psi) < 0.5);
}

TEST_CASE("build_path: circle curvature error decreases with waypoint density") {
    // the spline fit, not the resample step, limits curvature accuracy
    double errs[2];
    int counts[2] = {36, 144};
    for (int k = 0; k < 2; ++k) {
        ReferencePath path = build_path(circle_waypoints(20.0, counts[k]), 0.1);
        const auto& pts = path.points();
        double worst = 0.0;
        for (std::size_t i = pts.size() / 10; i < pts.size() * 9 / 10; ++i)
            worst = std::max(worst, std::abs(pts[i].kappa - 0.05));
        errs[k] = worst;
    }
    CHECK(errs[1] < 0.2 * errs[0]);
    CHECK(errs[1] < 1e-4);
}

TEST_CASE("project_to_path: point on the path has zero lateral error") {
    ReferencePath path = build_path(straight_waypoints(20.0, 10), 0.1);
    PathPoint p = path.at_arc_length(7.35);
    ProjectionResult r = project_to_path(path, p.x, p.y);
    CHECK(std::abs(r.e_lat) < 1e-9);
    CHECK(r.s_star == doctest::Approx(7.35).epsilon(1e-9));
}

TEST_CASE("project_to_path: axis-aligned offset") {
    ReferencePath path = build_path(straight_waypoints(20.0, 10), 0.1);
    ProjectionResult r = project_to_path(path, 5.0, 0.3);
    CHECK(r.s_star == doctest::Approx(5.0).epsilon(1e-9));
    CHECK(r.e_lat == doctest::Approx(0.3).epsilon(1e-9));
}

TEST_CASE("project_to_path: matches exhaustive nearest-sample oracle") {
    ReferencePath path = build_path(circle_waypoints(15.0, 72), 0.1);
    Rng rng(42);
    for (int trial = 0; trial < 200; ++trial) {
        double a = rng.uniform(0.5, 5.5);
        double x = 15.0 * std::sin(a) + rng.uniform(-2.0, 2.0);
        double y = 15.0 * (1.0 - std::cos(a)) + rng.uniform(-2.0, 2.0);
        ProjectionResult r = project_to_path(path, x, y);
        // brute force over all samples
        double best_s = 0.0, best_d2 = 1e300;
        for (const auto& p : path.points()) {
            double d2 = (x - p.x) * (x - p.x) + (y - p.y) * (y - p.y);
            if (d2 < best_d2) {
                best_d2 = d2;
                best_s = p.s;
            }
        }
        CHECK(std::abs(r.s_star - best_s) <= path.ds() + 1e-9);
        CHECK(std::abs(r.e_lat) <= std::sqrt(best_d2) + 1e-9);
    }
}

TEST_CASE("preview_point: straight path straight ahead") {
    ReferencePath path = build_path(straight_waypoints(20.0, 10), 0.1);
    PreviewPoint pp = preview_point(path, Pose2D{0.0, 0.0, 0.0}, 2.0);
    CHECK(pp.x_ref == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(std::abs(pp.y_ref) < 1e-9);
}

TEST_CASE("preview_point: rotated pose frame") {
    ReferencePath path = build_path(straight_waypoints(20.0, 10), 0.1);
    PreviewPoint pp = preview_point(path, Pose2D{0.0, 0.0, 1.5707963267948966}, 2.0);
    CHECK(std::abs(pp.x_ref) < 1e-9);
    CHECK(pp.y_ref == doctest::Approx(-2.0).epsilon(1e-9));
}

TEST_CASE("preview_point: circle chord geometry") {
    const double R = 25.0;
    ReferencePath path = build_path(circle_waypoints(R, 150), 0.1);
    PathPoint p = path.at_arc_length(30.0);
    PreviewPoint pp = preview_point(path, Pose2D{p.x, p.y, p.psi}, 2.0);
    double expected = R * (1.0 - std::cos(2.0 / R));
    CHECK(pp.y_ref == doctest::Approx(expected).epsilon(0.01));
}

TEST_CASE("preview_point: exhausted at path end") {
    ReferencePath path = build_path(straight_waypoints(20.0, 10), 0.1);
    CHECK_THROWS_AS(preview_point(path, Pose2D{25.0, 0.0, 0.0}, 2.0), PathExhausted);
}

TEST_CASE("preview_point: result lies on the path in the global frame") {
    ReferencePath path = build_path(circle_waypoints(15.0, 72, 3.0), 0.1);
    Rng rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        double s = rng.uniform(1.0, path.length() - 5.0);
        PathPoint p = path.at_arc_length(s);
        Pose2D pose{p.x + rng.uniform(-0.5, 0.5), p.y + rng.uniform(-0.5, 0.5),
                    p.psi + rng.uniform(-0.2, 0.2)};
        PreviewPoint pp = preview_point(path, pose, 2.0);
        double gx = pose.x + pp.x_ref * std::cos(pose.psi) - pp.y_ref * std::sin(pose.psi);
        double gy = pose.y + pp.x_ref * std::sin(pose.psi) + pp.y_ref * std::cos(pose.psi);
        ProjectionResult back = project_to_path(path, gx, gy);
        CHECK(std::abs(back.e_lat) <= path.ds());
    }
}

TEST_CASE("generate_track: deterministic for a given seed") {
    TrackSpec spec = track_preset("S2");
    auto a = generate_track(spec);
    auto b = generate_track(spec);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].x == b[i].x);
        CHECK(a[i].y == b[i].y);
    }
}

TEST_CASE("generate_track: zero curvature profile gives a straight track") {
    TrackSpec spec;
    spec.length = 100.0;
    spec.curvature_profile = {{100.0, 0.0}};
    spec.section_id = "flat";
    auto wps = generate_track(spec);
    for (const auto& w : wps) CHECK(std::abs(w.y) < 1e-9);
}

TEST_CASE("generate_track: S1 is curvier than S3") {
    auto max_kappa = [](const std::string& sec) {
        ReferencePath p = build_path(generate_track(track_preset(sec)), 0.1);
        return p.kappa_max();
    };
    CHECK(max_kappa("S1") > max_kappa("S3"));
}

TEST_CASE("generate_track: invalid specs rejected") {
    TrackSpec spec;
    spec.length = -5.0;
    spec.curvature_profile = {{10.0, 0.0}};
    CHECK_THROWS_AS(generate_track(spec), InvalidSpec);
    spec.length = 100.0;
    spec.curvature_profile = {{10.0, 0.5}};  // above the global curvature bound
    CHECK_THROWS_AS(generate_track(spec), InvalidSpec);
}

TEST_CASE("track spec config round-trip") {
    TrackSpec spec = track_preset("S1");
    TrackSpec back = track_spec_from_config(track_spec_to_config(spec));
    CHECK(back.section_id == spec.section_id);
    CHECK(back.seed == spec.seed);
    CHECK(back.length == spec.length);
    REQUIRE(back.curvature_profile.size() == spec.curvature_profile.size());
    for (std::size_t i = 0; i < spec.curvature_profile.size(); ++i) {
        CHECK(back.curvature_profile[i].length == spec.curvature_profile[i].length);
        CHECK(back.curvature_profile[i].kappa == spec.curvature_profile[i].kappa);
    }
}
