#include "lifetrack/qp.hpp"

#include <algorithm>
#include <cmath>

#include "lifetrack/errors.hpp"

namespace lifetrack {

namespace {

void multiply(const QpProblem& p, const std::vector<double>& x, std::vector<double>& out) {
    const std::size_t n = p.dim();
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        const double* row = p.H.data() + i * n;
        for (std::size_t j = 0; j < n; ++j) acc += row[j] * x[j];
        out[i] = acc;
    }
}

void gradient(const QpProblem& p, const std::vector<double>& x, std::vector<double>& g) {
    multiply(p, x, g);
    for (std::size_t i = 0; i < p.dim(); ++i) g[i] += p.f[i];
}

}  // namespace

double box_qp_kkt_residual(const QpProblem& p, const std::vector<double>& x) {
    std::vector<double> g(p.dim());
    gradient(p, x, g);
    double res = 0.0;
    for (std::size_t i = 0; i < p.dim(); ++i) {
        double v;
        if (x[i] <= p.lo[i] + 1e-12) {
            v = std::max(0.0, -g[i]);  // at lower bound gradient must be >= 0
        } else if (x[i] >= p.hi[i] - 1e-12) {
            v = std::max(0.0, g[i]);
        } else {
            v = std::abs(g[i]);
        }
        res = std::max(res, v);
    }
    return res;
}

std::vector<double> solve_box_qp(const QpProblem& p, double tol, int max_iter) {
    const std::size_t n = p.dim();
    if (n == 0) return {};
    if (p.H.size() != n * n || p.lo.size() != n || p.hi.size() != n)
        throw LengthMismatch("QpProblem dimensions inconsistent");

    auto project = [&](std::vector<double>& x) {
        for (std::size_t i = 0; i < n; ++i) x[i] = std::clamp(x[i], p.lo[i], p.hi[i]);
    };

    std::vector<double> x(n, 0.0);
    project(x);
    std::vector<double> g(n), x_prev(n), g_prev(n), trial(n);
    gradient(p, x, g);

    // initial step from the diagonal scale
    double diag_max = 1e-12;
    for (std::size_t i = 0; i < n; ++i) diag_max = std::max(diag_max, std::abs(p.H[i * n + i]));
    double step = 1.0 / diag_max;

    for (int it = 0; it < max_iter; ++it) {
        if (box_qp_kkt_residual(p, x) <= tol) return x;

        x_prev = x;
        g_prev = g;
        for (std::size_t i = 0; i < n; ++i) trial[i] = x[i] - step * g[i];
        project(trial);
        x = trial;
        gradient(p, x, g);

        // BB1 step from the last displacement; fall back to the diagonal
        // scale when degenerate.
        double sy = 0.0, ss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double si = x[i] - x_prev[i];
            double yi = g[i] - g_prev[i];
            sy += si * yi;
            ss += si * si;
        }
        step = (sy > 1e-300) ? ss / sy : 1.0 / diag_max;
        step = std::clamp(step, 1e-12, 1e12);
    }
    if (box_qp_kkt_residual(p, x) <= tol) return x;
    throw QpFailure();
}

}  // namespace lifetrack
