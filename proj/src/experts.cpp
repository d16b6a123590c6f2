#include "lifetrack/experts.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <sstream>

#include "lifetrack/errors.hpp"

namespace lifetrack {

namespace {

using Vec4 = std::array<double, 4>;
using Mat4 = std::array<std::array<double, 4>, 4>;

Vec4 mat_vec(const Mat4& A, const Vec4& v) {
    Vec4 out{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) out[i] += A[i][j] * v[j];
    return out;
}

}  // namespace

double pure_pursuit(const VehicleState& state, const ReferencePath& path, double lookahead,
                    const VehicleParams& params) {
    Pose2D pose{state.x, state.y, state.psi};
    PreviewPoint pp = preview_point(path, pose, lookahead);
    double ld = std::sqrt(pp.x_ref * pp.x_ref + pp.y_ref * pp.y_ref);
    if (ld < 1e-9) return 0.0;
    double alpha = std::atan2(pp.y_ref, pp.x_ref);
    double delta = std::atan(2.0 * params.wheelbase() * std::sin(alpha) / ld);
    return std::clamp(delta, -params.delta_max, params.delta_max);
}

QpProblem build_mpc_qp(const VehicleState& state, const ReferencePath& path,
                       const MpcConfig& cfg, const VehicleParams& params) {
    const int N = cfg.horizon_steps;
    const double vx = low_speed_guard(state.vx);
    const double m = params.m, Iz = params.Iz;
    const double Cf = params.Cf, Cr = params.Cr;
    const double lf = params.lf, lr = params.lr;
    const double b1 = lf * Cf - lr * Cr;
    const double c2 = lf * lf * Cf + lr * lr * Cr;

    // continuous-time error dynamics, Euler discretized at cfg.dt
    Mat4 Ad{};
    for (int i = 0; i < 4; ++i) Ad[i][i] = 1.0;
    Ad[0][1] += cfg.dt;
    Ad[1][1] += cfg.dt * (-(Cf + Cr) / (m * vx));
    Ad[1][2] += cfg.dt * ((Cf + Cr) / m);
    Ad[1][3] += cfg.dt * (-b1 / (m * vx));
    Ad[2][3] += cfg.dt;
    Ad[3][1] += cfg.dt * (-b1 / (Iz * vx));
    Ad[3][2] += cfg.dt * (b1 / Iz);
    Ad[3][3] += cfg.dt * (-c2 / (Iz * vx));

    Vec4 Bd{0.0, cfg.dt * Cf / m, 0.0, cfg.dt * lf * Cf / Iz};
    // feedforward direction, multiplied by psi_dot_des = vx * kappa
    Vec4 Ed{0.0, cfg.dt * (-b1 / (m * vx) - vx), 0.0, cfg.dt * (-c2 / (Iz * vx))};

    // current tracking-error state
    ProjectionResult proj = project_to_path(path, Pose2D{state.x, state.y, state.psi});
    double kappa0 = path.at_arc_length(proj.s_star).kappa;
    Vec4 x0{proj.e_lat, state.vy + vx * proj.e_psi, proj.e_psi, state.r - vx * kappa0};

    // free-response term c_k and input maps G[k][j] = Ad^{k-1-j} Bd
    std::vector<Vec4> c(N + 1), impulse(N + 1);  // impulse[p] = Ad^p Bd
    c[0] = x0;
    impulse[0] = Bd;
    for (int k = 1; k <= N; ++k) {
        double s_k = std::min(proj.s_star + vx * cfg.dt * (k - 1), path.length());
        double kappa = path.at_arc_length(s_k).kappa;
        Vec4 w = Ed;
        for (auto& v : w) v *= vx * kappa;
        c[k] = mat_vec(Ad, c[k - 1]);
        for (int i = 0; i < 4; ++i) c[k][i] += w[i];
        if (k < N) impulse[k] = mat_vec(Ad, impulse[k - 1]);
    }

    const Vec4 q{cfg.q_ey, 0.0, cfg.q_epsi, 0.0};
    auto G = [&](int k, int j) -> const Vec4& { return impulse[k - 1 - j]; };

    QpProblem p;
    p.H.assign(static_cast<std::size_t>(N) * N, 0.0);
    p.f.assign(N, 0.0);
    p.lo.assign(N, -cfg.delta_bound);
    p.hi.assign(N, cfg.delta_bound);

    // tracking cost: sum_k x_k' Q x_k with x_k = c_k + sum_j G(k,j) u_j
    for (int k = 1; k <= N; ++k) {
        for (int j = 0; j < k; ++j) {
            const Vec4& gj = G(k, j);
            for (int l = 0; l < k; ++l) {
                const Vec4& gl = G(k, l);
                double acc = 0.0;
                for (int i = 0; i < 4; ++i) acc += q[i] * gj[i] * gl[i];
                p.H[static_cast<std::size_t>(j) * N + l] += 2.0 * acc;
            }
            double fj = 0.0;
            for (int i = 0; i < 4; ++i) fj += q[i] * gj[i] * c[k][i];
            p.f[j] += 2.0 * fj;
        }
    }
    // effort and rate costs (rate chained from the currently applied delta)
    for (int j = 0; j < N; ++j) p.H[static_cast<std::size_t>(j) * N + j] += 2.0 * cfg.r_delta;
    p.H[0] += 2.0 * cfg.r_ddelta;
    p.f[0] += -2.0 * cfg.r_ddelta * state.delta;
    for (int j = 1; j < N; ++j) {
        p.H[static_cast<std::size_t>(j) * N + j] += 2.0 * cfg.r_ddelta;
        p.H[static_cast<std::size_t>(j - 1) * N + (j - 1)] += 2.0 * cfg.r_ddelta;
        p.H[static_cast<std::size_t>(j) * N + (j - 1)] += -2.0 * cfg.r_ddelta;
        p.H[static_cast<std::size_t>(j - 1) * N + j] += -2.0 * cfg.r_ddelta;
    }
    return p;
}

double mpc_control(const VehicleState& state, const ReferencePath& path, const MpcConfig& cfg,
                   const VehicleParams& params) {
    QpProblem p = build_mpc_qp(state, path, cfg, params);
    std::vector<double> u = solve_box_qp(p, 1e-6);
    return std::clamp(u[0], -params.delta_max, params.delta_max);
}

MpcConfig mpc_config_from_file(const std::string& file) {
    std::ifstream in(file);
    if (!in) throw IoError("cannot open " + file);
    MpcConfig cfg;
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        std::istringstream key_s(line.substr(0, eq));
        std::string key;
        key_s >> key;
        double val = std::stod(line.substr(eq + 1));
        if (key == "horizon_steps") cfg.horizon_steps = static_cast<int>(val);
        else if (key == "dt") cfg.dt = val;
        else if (key == "q_ey") cfg.q_ey = val;
        else if (key == "q_epsi") cfg.q_epsi = val;
        else if (key == "r_delta") cfg.r_delta = val;
        else if (key == "r_ddelta") cfg.r_ddelta = val;
        else if (key == "delta_bound") cfg.delta_bound = val;
    }
    return cfg;
}

}  // namespace lifetrack
