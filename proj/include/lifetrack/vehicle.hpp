#pragma once

namespace lifetrack {

struct VehicleParams {
    double m = 1500.0;            // kg
    double Iz = 2500.0;           // kg m^2
    double lf = 1.2;              // m, CoG to front axle
    double lr = 1.4;              // m, CoG to rear axle
    double Cf = 80000.0;          // N/rad
    double Cr = 80000.0;          // N/rad
    double delta_max = 0.5;       // rad
    double delta_rate_max = 1.0;  // rad/s

    double wheelbase() const { return lf + lr; }
};

struct VehicleState {
    double x = 0.0;
    double y = 0.0;
    double psi = 0.0;
    double vx = 0.0;
    double vy = 0.0;
    double r = 0.0;      // yaw rate
    double delta = 0.0;  // current (applied) steering
};

struct SimConfig {
    double dt = 0.05;         // control period, s
    int substeps = 5;         // RK4 substeps per control period
    double vx_lag_tau = 0.5;  // longitudinal first-order lag, s
};

// One control period of the 3-DOF single-track model with linear tires.
// The command goes through the rate limiter and saturation first; lateral
// dynamics are integrated with RK4 over cfg.substeps.
// Throws NumericBlowup when any state magnitude exceeds 1e6.
VehicleState step_dynamic(const VehicleState& state, double delta_cmd, double vx_ref,
                          const VehicleParams& params, const SimConfig& cfg);

// Kinematic bicycle, test oracle only.
VehicleState step_kinematic(const VehicleState& state, double delta, double v, double dt,
                            const VehicleParams& params);

// Effective longitudinal speed used in slip-angle denominators.
double low_speed_guard(double vx);

}  // namespace lifetrack
