#include "qlmc/kernel.hpp"

#include <cmath>
#include <stdexcept>

namespace qlmc {

void KernelSpec::validate() const {
    if (family == KernelFamily::RBF && !(sigma > 0.0))
        throw std::invalid_argument("KernelSpec: RBF sigma must be positive");
}

double kernel_eval(const KernelSpec& spec, const Eigen::Ref<const Eigen::VectorXd>& x,
                   const Eigen::Ref<const Eigen::VectorXd>& y) {
    spec.validate();
    if (x.size() != y.size())
        throw std::invalid_argument("kernel_eval: dimension mismatch");
    if (spec.family == KernelFamily::Linear)
        return x.dot(y);
    const double d2 = (x - y).squaredNorm();
    return std::exp(-d2 / (2.0 * spec.sigma * spec.sigma));
}

Eigen::MatrixXd gram(const KernelSpec& spec, const Eigen::Ref<const Eigen::MatrixXd>& X) {
    spec.validate();
    if (X.rows() == 0)
        throw std::invalid_argument("gram: empty sample matrix");
    const Eigen::Index n = X.rows();
    Eigen::MatrixXd K(n, n);
    if (spec.family == KernelFamily::Linear) {
        K.setZero();
        K.selfadjointView<Eigen::Lower>().rankUpdate(X);
        K.triangularView<Eigen::StrictlyUpper>() = K.transpose();
        return K;
    }
    const double inv = 1.0 / (2.0 * spec.sigma * spec.sigma);
    for (Eigen::Index i = 0; i < n; ++i) {
        K(i, i) = 1.0;
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double k = std::exp(-(X.row(i) - X.row(j)).squaredNorm() * inv);
            K(i, j) = k;
            K(j, i) = k;
        }
    }
    return K;
}

Eigen::MatrixXd gram_cross(const KernelSpec& spec, const Eigen::Ref<const Eigen::MatrixXd>& X,
                           const Eigen::Ref<const Eigen::MatrixXd>& Z) {
    spec.validate();
    if (X.cols() != Z.cols())
        throw std::invalid_argument("gram_cross: feature dimension mismatch");
    if (spec.family == KernelFamily::Linear)
        return X * Z.transpose();
    const double inv = 1.0 / (2.0 * spec.sigma * spec.sigma);
    Eigen::MatrixXd K(X.rows(), Z.rows());
    for (Eigen::Index i = 0; i < X.rows(); ++i)
        for (Eigen::Index j = 0; j < Z.rows(); ++j)
            K(i, j) = std::exp(-(X.row(i) - Z.row(j)).squaredNorm() * inv);
    return K;
}

}  // namespace qlmc
