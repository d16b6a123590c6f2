#include "lifetrack/vehicle.hpp"

#include <algorithm>
#include <cmath>

#include "lifetrack/errors.hpp"

namespace lifetrack {

namespace {

struct Deriv {
    double x, y, psi, vx, vy, r;
};

Deriv dynamics(const VehicleState& s, double delta, double vx_ref,
               const VehicleParams& p, double tau) {
    const double vx_eff = low_speed_guard(s.vx);
    const double alpha_f = delta - std::atan2(s.vy + p.lf * s.r, vx_eff);
    const double alpha_r = -std::atan2(s.vy - p.lr * s.r, vx_eff);
    const double Fyf = p.Cf * alpha_f;
    const double Fyr = p.Cr * alpha_r;

    Deriv d;
    d.vy = (Fyf * std::cos(delta) + Fyr) / p.m - s.vx * s.r;
    d.r = (p.lf * Fyf * std::cos(delta) - p.lr * Fyr) / p.Iz;
    d.vx = (vx_ref - s.vx) / tau;
    d.x = s.vx * std::cos(s.psi) - s.vy * std::sin(s.psi);
    d.y = s.vx * std::sin(s.psi) + s.vy * std::cos(s.psi);
    d.psi = s.r;
    return d;
}

VehicleState advance(const VehicleState& s, const Deriv& d, double h) {
    VehicleState out = s;
    out.x += h * d.x;
    out.y += h * d.y;
    out.psi += h * d.psi;
    out.vx += h * d.vx;
    out.vy += h * d.vy;
    out.r += h * d.r;
    return out;
}

void check_finite(const VehicleState& s) {
    const double vals[] = {s.x, s.y, s.psi, s.vx, s.vy, s.r};
    for (double v : vals)
        if (!std::isfinite(v) || std::abs(v) > 1e6) throw NumericBlowup();
}

}  // namespace

double low_speed_guard(double vx) { return std::max(vx, 0.5); }

VehicleState step_dynamic(const VehicleState& state, double delta_cmd, double vx_ref,
                          const VehicleParams& params, const SimConfig& cfg) {
    // actuator: rate limit then saturation over the full control period
    double delta = state.delta;
    double max_change = params.delta_rate_max * cfg.dt;
    delta += std::clamp(delta_cmd - delta, -max_change, max_change);
    delta = std::clamp(delta, -params.delta_max, params.delta_max);

    VehicleState s = state;
    const double h = cfg.dt / cfg.substeps;
    for (int i = 0; i < cfg.substeps; ++i) {
        Deriv k1 = dynamics(s, delta, vx_ref, params, cfg.vx_lag_tau);
        Deriv k2 = dynamics(advance(s, k1, h / 2.0), delta, vx_ref, params, cfg.vx_lag_tau);
        Deriv k3 = dynamics(advance(s, k2, h / 2.0), delta, vx_ref, params, cfg.vx_lag_tau);
        Deriv k4 = dynamics(advance(s, k3, h), delta, vx_ref, params, cfg.vx_lag_tau);
        s.x += h / 6.0 * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x);
        s.y += h / 6.0 * (k1.y + 2.0 * k2.y + 2.0 * k3.y + k4.y);
        s.psi += h / 6.0 * (k1.psi + 2.0 * k2.psi + 2.0 * k3.psi + k4.psi);
        s.vx += h / 6.0 * (k1.vx + 2.0 * k2.vx + 2.0 * k3.vx + k4.vx);
        s.vy += h / 6.0 * (k1.vy + 2.0 * k2.vy + 2.0 * k3.vy + k4.vy);
        s.r += h / 6.0 * (k1.r + 2.0 * k2.r + 2.0 * k3.r + k4.r);
    }
    s.delta = delta;
    check_finite(s);
    return s;
}

VehicleState step_kinematic(const VehicleState& state, double delta, double v, double dt,
                            const VehicleParams& params) {
    VehicleState s = state;
    s.x += dt * v * std::cos(s.psi);
    s.y += dt * v * std::sin(s.psi);
    s.psi += dt * v * std::tan(delta) / params.wheelbase();
    s.vx = v;
    s.vy = 0.0;
    s.r = v * std::tan(delta) / params.wheelbase();
    s.delta = delta;
    return s;
}

}  // namespace lifetrack
