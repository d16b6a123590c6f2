#include "lifetrack/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "lifetrack/errors.hpp"
#include "lifetrack/rng.hpp"

namespace lifetrack {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kMaxTrackCurvature = 0.06;  // 1/m, global track bound

// Natural cubic spline on knots t with values v. Stores the second
// derivatives; evaluation by standard Hermite-style formula.
class CubicSpline1D {
public:
    CubicSpline1D(std::vector<double> t, std::vector<double> v)
        : t_(std::move(t)), v_(std::move(v)), m_(t_.size(), 0.0) {
        const std::size_t n = t_.size();
        std::vector<double> a(n, 0.0), b(n, 1.0), c(n, 0.0), d(n, 0.0);
        for (std::size_t i = 1; i + 1 < n; ++i) {
            double h0 = t_[i] - t_[i - 1];
            double h1 = t_[i + 1] - t_[i];
            a[i] = h0 / 6.0;
            b[i] = (h0 + h1) / 3.0;
            c[i] = h1 / 6.0;
            d[i] = (v_[i + 1] - v_[i]) / h1 - (v_[i] - v_[i - 1]) / h0;
        }
        // Thomas solve; natural ends keep m[0] = m[n-1] = 0.
        for (std::size_t i = 2; i + 1 < n; ++i) {
            double w = a[i] / b[i - 1];
            b[i] -= w * c[i - 1];
            d[i] -= w * d[i - 1];
        }
        for (std::size_t i = n - 2; i >= 1; --i) {
            m_[i] = (d[i] - c[i] * m_[i + 1]) / b[i];
            if (i == 1) break;
        }
    }

    double value(double t) const {
        std::size_t i = segment(t);
        double h = t_[i + 1] - t_[i];
        double A = (t_[i + 1] - t) / h;
        double B = (t - t_[i]) / h;
        return A * v_[i] + B * v_[i + 1] +
               ((A * A * A - A) * m_[i] + (B * B * B - B) * m_[i + 1]) * h * h / 6.0;
    }

    double deriv(double t) const {
        std::size_t i = segment(t);
        double h = t_[i + 1] - t_[i];
        double A = (t_[i + 1] - t) / h;
        double B = (t - t_[i]) / h;
        return (v_[i + 1] - v_[i]) / h +
               ((3.0 * B * B - 1.0) * m_[i + 1] - (3.0 * A * A - 1.0) * m_[i]) * h / 6.0;
    }

    double deriv2(double t) const {
        std::size_t i = segment(t);
        double h = t_[i + 1] - t_[i];
        double A = (t_[i + 1] - t) / h;
        double B = (t - t_[i]) / h;
        return A * m_[i] + B * m_[i + 1];
    }

    double t_front() const { return t_.front(); }
    double t_back() const { return t_.back(); }

private:
    std::size_t segment(double t) const {
        if (t <= t_.front()) return 0;
        if (t >= t_.back()) return t_.size() - 2;
        auto it = std::upper_bound(t_.begin(), t_.end(), t);
        return static_cast<std::size_t>(it - t_.begin()) - 1;
    }

    std::vector<double> t_, v_, m_;
};

double speed_of(const CubicSpline1D& sx, const CubicSpline1D& sy, double t) {
    double dx = sx.deriv(t);
    double dy = sy.deriv(t);
    return std::sqrt(dx * dx + dy * dy);
}

// Composite Simpson on [a, b], refined until the estimate changes by less
// than tol.
double arc_length_simpson(const CubicSpline1D& sx, const CubicSpline1D& sy,
                          double a, double b, double tol) {
    double prev = 0.0;
    for (int panels = 4;; panels *= 2) {
        double h = (b - a) / panels;
        double sum = speed_of(sx, sy, a) + speed_of(sx, sy, b);
        for (int i = 1; i < panels; ++i)
            sum += (i % 2 ? 4.0 : 2.0) * speed_of(sx, sy, a + i * h);
        double est = sum * h / 3.0;
        if (panels >= 16 && std::abs(est - prev) < tol) return est;
        if (panels > 4096) return est;
        prev = est;
    }
}

}  // namespace

double normalize_angle(double a) {
    a = std::fmod(a, 2.0 * kPi);
    if (a <= -kPi) a += 2.0 * kPi;
    if (a > kPi) a -= 2.0 * kPi;
    return a;
}

ReferencePath::ReferencePath(std::vector<PathPoint> points, double ds)
    : points_(std::move(points)), ds_(ds) {
    for (const auto& p : points_) kappa_max_ = std::max(kappa_max_, std::abs(p.kappa));
}

PathPoint ReferencePath::at_arc_length(double s) const {
    if (points_.empty()) return {};
    if (s <= 0.0) return points_.front();
    if (s >= length()) return points_.back();
    std::size_t i = std::min(static_cast<std::size_t>(s / ds_), points_.size() - 2);
    double t = (s - points_[i].s) / ds_;
    const PathPoint& p0 = points_[i];
    const PathPoint& p1 = points_[i + 1];
    PathPoint out;
    out.x = p0.x + t * (p1.x - p0.x);
    out.y = p0.y + t * (p1.y - p0.y);
    out.s = s;
    out.psi = p0.psi + t * (p1.psi - p0.psi);  // unwrapped, lerp is safe
    out.kappa = p0.kappa + t * (p1.kappa - p0.kappa);
    return out;
}

ReferencePath build_path(const std::vector<Waypoint>& waypoints, double ds) {
    if (waypoints.size() < 4) throw TooFewWaypoints();
    if (ds <= 0.0) throw InvalidSpec("ds must be positive");

    std::vector<double> t(waypoints.size()), xs(waypoints.size()), ys(waypoints.size());
    t[0] = 0.0;
    xs[0] = waypoints[0].x;
    ys[0] = waypoints[0].y;
    for (std::size_t i = 1; i < waypoints.size(); ++i) {
        double dx = waypoints[i].x - waypoints[i - 1].x;
        double dy = waypoints[i].y - waypoints[i - 1].y;
        double chord = std::sqrt(dx * dx + dy * dy);
        if (chord < 1e-12) throw DegenerateSegment();
        t[i] = t[i - 1] + chord;
        xs[i] = waypoints[i].x;
        ys[i] = waypoints[i].y;
    }

    CubicSpline1D sx(t, xs), sy(t, ys);

    // Arc length table on a fine parameter grid, then invert for uniform s.
    const double t_end = t.back();
    const int grid_n = std::max(64, static_cast<int>(t_end / (0.25 * ds)));
    std::vector<double> grid_t(grid_n + 1), grid_s(grid_n + 1);
    grid_t[0] = 0.0;
    grid_s[0] = 0.0;
    const double tol = 1e-6 / grid_n;
    for (int i = 1; i <= grid_n; ++i) {
        grid_t[i] = t_end * i / grid_n;
        grid_s[i] = grid_s[i - 1] + arc_length_simpson(sx, sy, grid_t[i - 1], grid_t[i], tol);
    }
    const double total = grid_s.back();

    std::vector<PathPoint> pts;
    double prev_psi = 0.0;
    std::size_t hint = 0;
    for (double s = 0.0; s <= total + 1e-12; s += ds) {
        double sc = std::min(s, total);
        while (hint + 1 < grid_s.size() && grid_s[hint + 1] < sc) ++hint;
        double seg = grid_s[hint + 1] - grid_s[hint];
        double frac = seg > 0.0 ? (sc - grid_s[hint]) / seg : 0.0;
        double tp = grid_t[hint] + frac * (grid_t[hint + 1] - grid_t[hint]);

        double dx = sx.deriv(tp), dy = sy.deriv(tp);
        double ddx = sx.deriv2(tp), ddy = sy.deriv2(tp);
        double sp2 = dx * dx + dy * dy;

        PathPoint p;
        p.x = sx.value(tp);
        p.y = sy.value(tp);
        p.s = s;
        double psi_raw = std::atan2(dy, dx);
        if (pts.empty()) {
            p.psi = psi_raw;
        } else {
            // unwrap against the previous sample
            double d = psi_raw - std::fmod(prev_psi, 2.0 * kPi);
            while (d > kPi) d -= 2.0 * kPi;
            while (d < -kPi) d += 2.0 * kPi;
            p.psi = prev_psi + d;
        }
        prev_psi = p.psi;
        p.kappa = (dx * ddy - dy * ddx) / (sp2 * std::sqrt(sp2));
        pts.push_back(p);
    }
    if (pts.size() < 2) throw InvalidSpec("path shorter than ds");
    return ReferencePath(std::move(pts), ds);
}

ProjectionResult project_to_path(const ReferencePath& path, double x, double y) {
    const auto& pts = path.points();
    if (pts.empty()) return {};

    std::size_t best = 0;
    double best_d2 = 1e300;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        double dx = x - pts[i].x;
        double dy = y - pts[i].y;
        double d2 = dx * dx + dy * dy;
        if (d2 < best_d2) {
            best_d2 = d2;
            best = i;
        }
    }

    // Refine onto the two adjacent segments.
    double best_s = pts[best].s;
    double best_dist2 = best_d2;
    double foot_tx = std::cos(pts[best].psi), foot_ty = std::sin(pts[best].psi);
    double foot_x = pts[best].x, foot_y = pts[best].y;
    for (std::size_t k = (best > 0 ? best - 1 : best);
         k <= best && k + 1 < pts.size(); ++k) {
        double ax = pts[k].x, ay = pts[k].y;
        double bx = pts[k + 1].x, by = pts[k + 1].y;
        double ux = bx - ax, uy = by - ay;
        double len2 = ux * ux + uy * uy;
        if (len2 < 1e-24) continue;
        double t = ((x - ax) * ux + (y - ay) * uy) / len2;
        t = std::clamp(t, 0.0, 1.0);
        double px = ax + t * ux, py = ay + t * uy;
        double dx = x - px, dy = y - py;
        double d2 = dx * dx + dy * dy;
        if (d2 < best_dist2 + 1e-15) {
            if (d2 < best_dist2) best_dist2 = d2;
            best_s = pts[k].s + t * (pts[k + 1].s - pts[k].s);
            double ul = std::sqrt(len2);
            foot_tx = ux / ul;
            foot_ty = uy / ul;
            foot_x = px;
            foot_y = py;
        }
    }

    ProjectionResult r;
    r.s_star = best_s;
    double ox = x - foot_x, oy = y - foot_y;
    double cross = foot_tx * oy - foot_ty * ox;
    r.e_lat = (cross >= 0.0 ? 1.0 : -1.0) * std::sqrt(best_dist2);
    return r;
}

ProjectionResult project_to_path(const ReferencePath& path, const Pose2D& pose) {
    ProjectionResult r = project_to_path(path, pose.x, pose.y);
    PathPoint p = path.at_arc_length(r.s_star);
    r.e_psi = normalize_angle(pose.psi - p.psi);
    return r;
}

PreviewPoint preview_point(const ReferencePath& path, const Pose2D& pose, double lookahead) {
    if (lookahead <= 0.0) throw InvalidSpec("lookahead must be positive");
    ProjectionResult proj = project_to_path(path, pose.x, pose.y);
    if (proj.s_star >= path.length() - 1e-12) throw PathExhausted();
    double s_target = std::min(proj.s_star + lookahead, path.length());
    PathPoint p = path.at_arc_length(s_target);
    double dx = p.x - pose.x, dy = p.y - pose.y;
    double c = std::cos(pose.psi), s = std::sin(pose.psi);
    PreviewPoint pp;
    pp.x_ref = c * dx + s * dy;
    pp.y_ref = -s * dx + c * dy;
    return pp;
}

std::vector<Waypoint> generate_track(const TrackSpec& spec) {
    if (spec.length <= 0.0) throw InvalidSpec("track length must be positive");
    if (spec.curvature_profile.empty()) throw InvalidSpec("empty curvature profile");
    for (const auto& seg : spec.curvature_profile) {
        if (seg.length <= 0.0) throw InvalidSpec("segment length must be positive");
        if (std::abs(seg.kappa) > kMaxTrackCurvature) throw InvalidSpec("segment curvature too large");
    }

    // Seeded smooth curvature ripple: three sinusoids with random wavelength
    // and phase, blended on top of the piecewise profile.
    Rng rng(spec.seed);
    double wav[3], ph[3], amp[3];
    for (int i = 0; i < 3; ++i) {
        wav[i] = rng.uniform(35.0, 90.0);
        ph[i] = rng.uniform(0.0, 2.0 * kPi);
        amp[i] = spec.perturb_amplitude * rng.uniform(0.4, 1.0);
    }

    auto profile_kappa = [&](double s) {
        double acc = 0.0;
        for (const auto& seg : spec.curvature_profile) {
            if (s < acc + seg.length) return seg.kappa;
            acc += seg.length;
        }
        return spec.curvature_profile.back().kappa;
    };
    auto kappa_at = [&](double s) {
        double k = profile_kappa(s);
        for (int i = 0; i < 3; ++i) k += amp[i] * std::sin(2.0 * kPi * s / wav[i] + ph[i]);
        return std::clamp(k, -kMaxTrackCurvature, kMaxTrackCurvature);
    };

    const double h = 0.5;        // integration step
    const double emit_ds = 2.0;  // waypoint spacing
    std::vector<Waypoint> wps;
    double x = 0.0, y = 0.0, theta = 0.0, since_emit = emit_ds;
    for (double s = 0.0; s <= spec.length; s += h) {
        if (since_emit >= emit_ds - 1e-9) {
            wps.push_back({x, y});
            since_emit = 0.0;
        }
        // midpoint rule on the heading
        double k0 = kappa_at(s);
        double th_mid = theta + 0.5 * h * k0;
        x += h * std::cos(th_mid);
        y += h * std::sin(th_mid);
        theta += h * kappa_at(s + 0.5 * h);
        since_emit += h;
    }
    wps.push_back({x, y});
    if (wps.size() < 4) throw InvalidSpec("track too short");
    return wps;
}

TrackSpec track_preset(const std::string& section_id) {
    TrackSpec spec;
    spec.section_id = section_id;
    if (section_id == "S1") {
        // hardest: richest curvature, held out for closed-loop testing
        spec.seed = 101;
        spec.length = 480.0;
        spec.perturb_amplitude = 0.004;
        spec.curvature_profile = {{60.0, 0.0},    {70.0, 0.040},  {50.0, -0.030},
                                  {60.0, 0.045},  {50.0, -0.045}, {70.0, 0.020},
                                  {60.0, -0.040}, {60.0, 0.010}};
    } else if (section_id == "S2") {
        spec.seed = 102;
        spec.length = 440.0;
        spec.perturb_amplitude = 0.003;
        spec.curvature_profile = {{70.0, 0.0},    {70.0, 0.035}, {60.0, -0.040},
                                  {70.0, 0.025},  {60.0, -0.020}, {60.0, 0.040},
                                  {50.0, -0.010}};
    } else if (section_id == "S3") {
        // easiest: gentle curvature
        spec.seed = 103;
        spec.length = 440.0;
        spec.perturb_amplitude = 0.002;
        spec.curvature_profile = {{80.0, 0.0},   {80.0, 0.020}, {70.0, -0.015},
                                  {80.0, 0.025}, {70.0, -0.025}, {60.0, 0.010}};
    } else {
        throw InvalidSpec("unknown track preset: " + section_id);
    }
    return spec;
}

std::string track_spec_to_config(const TrackSpec& spec) {
    std::ostringstream out;
    out << "section = " << spec.section_id << "\n";
    out << "seed = " << spec.seed << "\n";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", spec.length);
    out << "length = " << buf << "\n";
    std::snprintf(buf, sizeof(buf), "%.17g", spec.perturb_amplitude);
    out << "perturb_amplitude = " << buf << "\n";
    out << "profile = ";
    for (std::size_t i = 0; i < spec.curvature_profile.size(); ++i) {
        if (i) out << ",";
        std::snprintf(buf, sizeof(buf), "%.17g:%.17g", spec.curvature_profile[i].length,
                      spec.curvature_profile[i].kappa);
        out << buf;
    }
    out << "\n";
    return out.str();
}

TrackSpec track_spec_from_config(const std::string& text) {
    TrackSpec spec;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            auto b = s.find_first_not_of(" \t\r");
            auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key == "section") {
            spec.section_id = val;
        } else if (key == "seed") {
            spec.seed = std::stoull(val);
        } else if (key == "length") {
            spec.length = std::stod(val);
        } else if (key == "perturb_amplitude") {
            spec.perturb_amplitude = std::stod(val);
        } else if (key == "profile") {
            std::istringstream ps(val);
            std::string item;
            while (std::getline(ps, item, ',')) {
                auto colon = item.find(':');
                if (colon == std::string::npos) throw ConfigError("bad profile entry: " + item);
                spec.curvature_profile.push_back(
                    {std::stod(item.substr(0, colon)), std::stod(item.substr(colon + 1))});
            }
        }
    }
    return spec;
}

void write_waypoints_csv(const std::string& file, const std::vector<Waypoint>& wps) {
    std::ofstream out(file);
    if (!out) throw IoError("cannot open " + file);
    out << "x,y\n";
    char buf[80];
    for (const auto& w : wps) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", w.x, w.y);
        out << buf;
    }
}

}  // namespace lifetrack
