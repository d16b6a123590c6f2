#pragma once

#include "lifetrack/geometry.hpp"
#include "lifetrack/qp.hpp"
#include "lifetrack/vehicle.hpp"

namespace lifetrack {

struct MpcConfig {
    int horizon_steps = 20;
    double dt = 0.05;
    double q_ey = 10.0;     // 1/m^2
    double q_epsi = 5.0;    // 1/rad^2
    double r_delta = 1.0;   // 1/rad^2
    double r_ddelta = 5.0;  // 1/rad^2
    double delta_bound = 0.5;
};

// Geometric pure pursuit toward the preview point at `lookahead`.
double pure_pursuit(const VehicleState& state, const ReferencePath& path, double lookahead,
                    const VehicleParams& params);

// Lateral-error MPC: 4-state error model [e_y, de_y, e_psi, de_psi]
// linearized at the current vx with curvature feedforward, condensed into a
// box QP over the steering sequence. Returns the first control.
double mpc_control(const VehicleState& state, const ReferencePath& path, const MpcConfig& cfg,
                   const VehicleParams& params);

// Condensed QP for the above; exposed for oracle tests.
QpProblem build_mpc_qp(const VehicleState& state, const ReferencePath& path,
                       const MpcConfig& cfg, const VehicleParams& params);

MpcConfig mpc_config_from_file(const std::string& file);

}  // namespace lifetrack
