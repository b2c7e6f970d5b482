#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

namespace qlmc {

// min  0.5 a'Qa + p'a
// s.t. sum_i a_i = 1,  0 <= a_i <= C
//
// Q symmetric PSD. C = +inf disables the upper bound. Solved by pairwise
// coordinate descent on the maximal-violating pair, ties broken by lowest
// index so results are reproducible across platforms.
struct SimplexBoxQp {
    Eigen::MatrixXd Q;
    Eigen::VectorXd p;
    double C = std::numeric_limits<double>::infinity();
    double tol = 1e-6;
    std::size_t max_iter = 0;  // 0 -> 100000 * n
    bool record_trace = false;

    Eigen::Index size() const { return p.size(); }
    void validate() const;
};

struct QpSolution {
    Eigen::VectorXd alpha;
    double objective = 0.0;
    double kkt_residual = 0.0;
    std::size_t iterations = 0;
    std::vector<double> trace;  // per-step objective, only if record_trace
};

// Thrown when the iteration cap is reached before the KKT tolerance; keeps
// the best iterate so callers can inspect how close it got.
class QpMaxIterError : public std::runtime_error {
public:
    QpMaxIterError(std::string msg, Eigen::VectorXd alpha, double residual)
        : std::runtime_error(std::move(msg)), best_alpha(std::move(alpha)), residual(residual) {}
    Eigen::VectorXd best_alpha;
    double residual;
};

QpSolution solve(const SimplexBoxQp& problem);

// Maximal pairwise optimality violation of a feasible point: the gap between
// the largest gradient over decreasable coordinates and the smallest over
// increasable ones, floored at zero. Zero exactly at the optimum.
double kkt_residual(const SimplexBoxQp& problem, const Eigen::Ref<const Eigen::VectorXd>& alpha);

double qp_objective(const SimplexBoxQp& problem, const Eigen::Ref<const Eigen::VectorXd>& alpha);

}  // namespace qlmc
