#include "qlmc/qsvdd.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace qlmc {

namespace {

void check_b(double B) {
    if (!(B > -1.0)) throw std::invalid_argument("qsvdd: B must be > -1");
}

}  // namespace

SimplexBoxQp assemble_dual(const Eigen::MatrixXd& gram, double B, double C) {
    check_b(B);
    if (!(C > 0.0)) throw std::invalid_argument("qsvdd: C must be positive");
    const Eigen::Index n = gram.rows();
    if (static_cast<double>(n) * C < 1.0)
        throw std::invalid_argument("qsvdd: infeasible, n*C < 1");

    SimplexBoxQp qp;
    qp.Q = (2.0 / (1.0 + B)) * gram;
    const Eigen::VectorXd row_mean = gram.rowwise().mean();
    qp.p = (2.0 * B / (1.0 + B)) * row_mean - gram.diagonal();
    qp.C = C;
    return qp;
}

Eigen::VectorXd center_coefficients(const Eigen::Ref<const Eigen::VectorXd>& alpha, double B,
                                    Eigen::Index n) {
    check_b(B);
    return (alpha.array() + B / static_cast<double>(n)) / (1.0 + B);
}

QsvddModel fit_qsvdd(std::shared_ptr<const Eigen::MatrixXd> gram, double B, double C, double tol) {
    if (!gram) throw std::invalid_argument("fit_qsvdd: null gram");
    const Eigen::MatrixXd& K = *gram;
    const Eigen::Index n = K.rows();

    QsvddModel model;
    model.B = B;
    model.C = C;
    model.n = n;
    model.gram_ref = gram;

    if (n == 1) {
        check_b(B);
        if (!(C >= 1.0)) throw std::invalid_argument("qsvdd: infeasible, n*C < 1");
        model.alpha = Eigen::VectorXd::Ones(1);
        model.beta = Eigen::VectorXd::Ones(1);
        model.radius_sq = 0.0;
        model.beta_gram_beta = K(0, 0);
        return model;
    }

    SimplexBoxQp qp = assemble_dual(K, B, C);
    qp.tol = tol;
    const QpSolution sol = solve(qp);

    model.alpha = sol.alpha;
    model.beta = center_coefficients(sol.alpha, B, n);
    model.beta_gram_beta = model.beta.dot(K * model.beta);

    // Distances of the training points to the center. Margin support
    // vectors (0 < alpha < C) sit on the sphere; the radius is their median
    // distance, robust to solver jitter. When alpha mass saturates the box
    // exactly there are no margin support vectors; stationarity then only
    // brackets R^2 between the farthest interior point and the nearest
    // at-bound point, and the bracket midpoint is used. Taking the farthest
    // support vector instead would swallow the excluded outliers and undo
    // the soft ball.
    const Eigen::VectorXd k_beta = K * model.beta;
    const Eigen::VectorXd d2 =
        K.diagonal().array() - 2.0 * k_beta.array() + model.beta_gram_beta;

    const double lo = tol;
    std::vector<double> margin_d2;
    double inside_max = 0.0, bound_min = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < n; ++i) {
        if (model.alpha[i] <= lo)
            inside_max = std::max(inside_max, d2[i]);
        else if (model.alpha[i] >= C - lo)
            bound_min = std::min(bound_min, d2[i]);
        else
            margin_d2.push_back(d2[i]);
    }
    if (!margin_d2.empty()) {
        auto mid = margin_d2.begin() + margin_d2.size() / 2;
        std::nth_element(margin_d2.begin(), mid, margin_d2.end());
        double med = *mid;
        if (margin_d2.size() % 2 == 0) {
            auto lower = std::max_element(margin_d2.begin(), mid);
            med = 0.5 * (med + *lower);
        }
        model.radius_sq = med;
    } else if (std::isfinite(bound_min)) {
        model.radius_sq = 0.5 * (inside_max + bound_min);
    } else {
        model.radius_sq = inside_max;
    }
    model.radius_sq = std::max(model.radius_sq, 0.0);
    return model;
}

double dist_sq_to_center(const QsvddModel& model, const Eigen::Ref<const Eigen::VectorXd>& k_z,
                         double k_zz) {
    if (k_z.size() != model.n)
        throw std::invalid_argument("dist_sq_to_center: kernel vector length mismatch");
    return k_zz - 2.0 * model.beta.dot(k_z) + model.beta_gram_beta;
}

bool contains(const QsvddModel& model, const Eigen::Ref<const Eigen::VectorXd>& k_z, double k_zz) {
    return dist_sq_to_center(model, k_z, k_zz) <= model.radius_sq + 1e-9;
}

double dual_objective(const Eigen::MatrixXd& gram, double B, const QsvddModel& model) {
    // D(alpha) = sum_i alpha_i K_ii - a'Ka/(1+B) - (2B/(1+B)) a's + B m/(1+B)
    // with s the row means and m the grand mean; equals -f(alpha) + B m/(1+B)
    // for f the minimized QP objective.
    const SimplexBoxQp qp = assemble_dual(gram, B, model.C);
    const double m = gram.mean();
    return -qp_objective(qp, model.alpha) + B * m / (1.0 + B);
}

}  // namespace qlmc
