#pragma once

#include <Eigen/Core>

#include <memory>

#include "qlmc/qp.hpp"

namespace qlmc {

// Bounding hypersphere in kernel feature space with a gravity-center pull:
//
//   min  R^2 + B |xbar - a|^2 + C sum_i eps_i
//   s.t. |phi(x_i) - a|^2 <= R^2 + eps_i,  eps_i >= 0
//
// B in (-1, inf) weights the pull of the center a toward the class mean
// xbar; B = 0 is the classical soft minimum enclosing ball. The dual and
// the center formula are derived in docs/qsvdd-dual.md and checked against
// a direct primal minimizer in the test suite.
struct QsvddModel {
    Eigen::VectorXd alpha;  // dual coefficients, sum = 1, 0 <= alpha <= C
    Eigen::VectorXd beta;   // center coefficients: a = sum_i beta_i phi(x_i)
    double radius_sq = 0.0;
    double B = 0.0;
    double C = 1.0;
    Eigen::Index n = 0;
    std::shared_ptr<const Eigen::MatrixXd> gram_ref;
    double beta_gram_beta = 0.0;  // b'Kb, cached for membership queries
};

// Dual of the problem above as a simplex-box QP:
//   Q = 2K/(1+B),  p_i = (2B/(n(1+B))) sum_j K_ij - K_ii
SimplexBoxQp assemble_dual(const Eigen::MatrixXd& gram, double B, double C);

// beta_i = (alpha_i + B/n) / (1 + B)
Eigen::VectorXd center_coefficients(const Eigen::Ref<const Eigen::VectorXd>& alpha, double B,
                                    Eigen::Index n);

QsvddModel fit_qsvdd(std::shared_ptr<const Eigen::MatrixXd> gram, double B, double C,
                     double tol = 1e-6);

// |phi(z) - a|^2 = k(z,z) - 2 b'k_z + b'Kb for k_z the kernel vector of z
// against the training set.
double dist_sq_to_center(const QsvddModel& model, const Eigen::Ref<const Eigen::VectorXd>& k_z,
                         double k_zz);

bool contains(const QsvddModel& model, const Eigen::Ref<const Eigen::VectorXd>& k_z, double k_zz);

// Dual objective value including the alpha-independent constants, so that
// it equals the primal optimum (strong duality). Used by verification code.
double dual_objective(const Eigen::MatrixXd& gram, double B, const QsvddModel& model);

}  // namespace qlmc
