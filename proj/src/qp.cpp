#include "qlmc/qp.hpp"

#include <algorithm>
#include <cmath>

namespace qlmc {

namespace {
constexpr double kBoundSlack = 1e-14;
}

void SimplexBoxQp::validate() const {
    const Eigen::Index n = p.size();
    if (n < 1) throw std::invalid_argument("SimplexBoxQp: empty problem");
    if (Q.rows() != n || Q.cols() != n)
        throw std::invalid_argument("SimplexBoxQp: Q/p dimension mismatch");
    if (!(C > 0.0)) throw std::invalid_argument("SimplexBoxQp: C must be positive");
    if (static_cast<double>(n) * C < 1.0)
        throw std::invalid_argument("SimplexBoxQp: infeasible, n*C < 1");
    if ((Q - Q.transpose()).cwiseAbs().maxCoeff() > 1e-10)
        throw std::invalid_argument("SimplexBoxQp: Q not symmetric");
}

double qp_objective(const SimplexBoxQp& problem, const Eigen::Ref<const Eigen::VectorXd>& alpha) {
    return 0.5 * alpha.dot(problem.Q * alpha) + problem.p.dot(alpha);
}

namespace {

// Most violating pair under the feasible-direction rule: u may increase
// (a_u < C), v may decrease (a_v > 0). Lowest index wins ties.
struct Pair {
    Eigen::Index u = -1, v = -1;
    double violation = 0.0;
};

Pair select_pair(const Eigen::VectorXd& alpha, const Eigen::VectorXd& g, double C) {
    Pair out;
    double gu = std::numeric_limits<double>::infinity();
    double gv = -std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < alpha.size(); ++i) {
        if (alpha[i] < C - kBoundSlack && g[i] < gu) {
            gu = g[i];
            out.u = i;
        }
        if (alpha[i] > kBoundSlack && g[i] > gv) {
            gv = g[i];
            out.v = i;
        }
    }
    if (out.u >= 0 && out.v >= 0) out.violation = gv - gu;
    return out;
}

}  // namespace

QpSolution solve(const SimplexBoxQp& problem) {
    problem.validate();
    const Eigen::Index n = problem.size();
    const double C = problem.C;
    const std::size_t max_iter =
        problem.max_iter ? problem.max_iter : 100000 * static_cast<std::size_t>(n);

    QpSolution sol;
    sol.alpha = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
    Eigen::VectorXd g = problem.Q * sol.alpha + problem.p;

    if (problem.record_trace) sol.trace.push_back(qp_objective(problem, sol.alpha));

    std::size_t it = 0;
    for (; it < max_iter; ++it) {
        const Pair pr = select_pair(sol.alpha, g, C);
        if (pr.u < 0 || pr.v < 0 || pr.violation <= problem.tol) break;

        const Eigen::Index u = pr.u, v = pr.v;
        const double eta = problem.Q(u, u) - 2.0 * problem.Q(u, v) + problem.Q(v, v);
        const double tmax = std::min(C - sol.alpha[u], sol.alpha[v]);
        double t;
        if (eta > 0.0)
            t = std::min(pr.violation / eta, tmax);
        else
            t = tmax;  // PSD => direction is linear, slope -violation < 0
        if (!(t > 0.0)) break;

        sol.alpha[u] += t;
        sol.alpha[v] -= t;
        // snap to a bound hit within rounding, shifting the residue to the
        // partner so sum(alpha) is conserved
        if (sol.alpha[v] < kBoundSlack) {
            sol.alpha[u] += sol.alpha[v];
            sol.alpha[v] = 0.0;
        }
        if (sol.alpha[u] > C - kBoundSlack && std::isfinite(C)) {
            sol.alpha[v] += sol.alpha[u] - C;
            sol.alpha[u] = C;
        }
        g += t * (problem.Q.col(u) - problem.Q.col(v));

        if (problem.record_trace) sol.trace.push_back(qp_objective(problem, sol.alpha));
    }

    sol.iterations = it;
    sol.objective = qp_objective(problem, sol.alpha);
    sol.kkt_residual = kkt_residual(problem, sol.alpha);
    if (sol.kkt_residual > problem.tol && it >= max_iter)
        throw QpMaxIterError("qp solve: max_iter reached, residual " +
                                 std::to_string(sol.kkt_residual),
                             sol.alpha, sol.kkt_residual);
    return sol;
}

double kkt_residual(const SimplexBoxQp& problem, const Eigen::Ref<const Eigen::VectorXd>& alpha) {
    if (alpha.size() != problem.size())
        throw std::invalid_argument("kkt_residual: dimension mismatch");
    const Eigen::VectorXd g = problem.Q * alpha + problem.p;
    const Pair pr = select_pair(alpha, g, problem.C);
    return std::max(pr.violation, 0.0);
}

}  // namespace qlmc
