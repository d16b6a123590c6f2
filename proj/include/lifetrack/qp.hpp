#pragma once

#include <vector>

namespace lifetrack {

// Dense box-constrained QP:  min 1/2 x'Hx + f'x  s.t.  lo <= x <= hi.
// H is stored row-major, symmetric positive semidefinite.
struct QpProblem {
    std::vector<double> H;  // n*n, row-major
    std::vector<double> f;  // n
    std::vector<double> lo;
    std::vector<double> hi;

    std::size_t dim() const { return f.size(); }
};

// Projected gradient with Barzilai-Borwein steps; returns the minimizer with
// KKT residual <= tol. Throws QpFailure when max_iter is exhausted.
std::vector<double> solve_box_qp(const QpProblem& p, double tol = 1e-8, int max_iter = 20000);

// Largest violation of the box-QP KKT conditions at x.
double box_qp_kkt_residual(const QpProblem& p, const std::vector<double>& x);

}  // namespace lifetrack
