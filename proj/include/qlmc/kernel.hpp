#pragma once

#include <Eigen/Core>

namespace qlmc {

enum class KernelFamily { Linear, RBF };

// Kernel configuration. RBF uses K(x,y) = exp(-|x-y|^2 / (2 sigma^2));
// sigma is ignored for the linear kernel.
struct KernelSpec {
    KernelFamily family = KernelFamily::Linear;
    double sigma = 1.0;

    static KernelSpec linear() { return {KernelFamily::Linear, 1.0}; }
    static KernelSpec rbf(double sigma) { return {KernelFamily::RBF, sigma}; }

    void validate() const;
};

double kernel_eval(const KernelSpec& spec, const Eigen::Ref<const Eigen::VectorXd>& x,
                   const Eigen::Ref<const Eigen::VectorXd>& y);

// Gram matrix of the rows of X. Symmetric by construction; RBF diagonals
// are exactly 1.
Eigen::MatrixXd gram(const KernelSpec& spec, const Eigen::Ref<const Eigen::MatrixXd>& X);

// Rectangular kernel block: entries k(X[i], Z[j]).
Eigen::MatrixXd gram_cross(const KernelSpec& spec, const Eigen::Ref<const Eigen::MatrixXd>& X,
                           const Eigen::Ref<const Eigen::MatrixXd>& Z);

}  // namespace qlmc
