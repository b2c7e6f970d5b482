#include "qlmc/hyperdisk.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace qlmc {

Hyperdisk build_hyperdisk(std::shared_ptr<const Eigen::MatrixXd> gram, double B, double C,
                          double qp_tol, double rank_tol) {
    if (!gram) throw std::invalid_argument("build_hyperdisk: null gram");
    const Eigen::MatrixXd& K = *gram;
    const Eigen::Index n = K.rows();

    Hyperdisk disk;
    disk.n = n;
    disk.gram = gram;
    disk.ball = fit_qsvdd(gram, B, C, qp_tol);

    // doubly centered Gram: HKH with H = I - 11'/n
    const Eigen::VectorXd s = K.rowwise().mean();
    const double m = s.mean();
    Eigen::MatrixXd Kc = K;
    Kc.colwise() -= s;
    Kc.rowwise() -= s.transpose();
    Kc.array() += m;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig((Kc + Kc.transpose()) * 0.5);
    const Eigen::VectorXd& evals = eig.eigenvalues();
    const double lmax = std::max(evals.maxCoeff(), 0.0);
    const double cut = rank_tol * std::max(lmax, 1e-300);

    Eigen::Index r = 0;
    for (Eigen::Index i = 0; i < n; ++i)
        if (evals[i] > cut) ++r;

    disk.projector.rank = r;
    disk.projector.mean_kernel = s;
    disk.projector.basis.resize(n, r);
    disk.projector.inv_eigs.resize(r);
    Eigen::Index out = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (evals[i] > cut) {
            disk.projector.basis.col(out) = eig.eigenvectors().col(i);
            disk.projector.inv_eigs[out] = 1.0 / evals[i];
            ++out;
        }
    }
    return disk;
}

Eigen::VectorXd project_onto_hyperdisk(const Hyperdisk& disk,
                                       const Eigen::Ref<const Eigen::VectorXd>& k_q) {
    const Eigen::Index n = disk.n;
    if (k_q.size() != n)
        throw std::invalid_argument("project_onto_hyperdisk: kernel vector length mismatch");

    const Eigen::VectorXd& beta = disk.ball.beta;
    if (disk.projector.rank == 0) return beta;  // degenerate disk: single point

    // projection onto the affine hull through the centered system:
    // c = 1/n + V diag(1/lambda) V' H(k_q - s)
    Eigen::VectorXd h = k_q - disk.projector.mean_kernel;
    h.array() -= h.mean();
    const Eigen::VectorXd w = disk.projector.inv_eigs.cwiseProduct(disk.projector.basis.transpose() * h);
    Eigen::VectorXd c = disk.projector.basis * w;
    c.array() += 1.0 / static_cast<double>(n);

    // radial shrink toward the ball center when the hull projection leaves
    // the ball; exact because the center lies in the hull
    const Eigen::VectorXd dc = c - beta;
    const double d2 = dc.dot(*disk.gram * dc);
    const double r2 = disk.ball.radius_sq;
    if (d2 > r2 && d2 > 0.0) {
        const double scale = std::sqrt(std::max(r2, 0.0) / d2);
        c = beta + scale * dc;
    }
    return c;
}

double overlap_tolerance(const Hyperdisk& plus, const Hyperdisk& minus) {
    return 1e-6 * (plus.radius() + minus.radius() + 1.0);
}

namespace {

double pair_dist_sq(const Hyperdisk& dp, const Hyperdisk& dm, const Eigen::MatrixXd& Kpm,
                    const Eigen::VectorXd& ap, const Eigen::VectorXd& am) {
    const double d2 =
        ap.dot(*dp.gram * ap) - 2.0 * ap.dot(Kpm * am) + am.dot(*dm.gram * am);
    return std::max(d2, 0.0);
}

ClosestPair closest_pair_impl(const Hyperdisk& dp, const Hyperdisk& dm,
                              const Eigen::MatrixXd& Kpm, double tol, std::size_t max_iter) {
    if (Kpm.rows() != dp.n || Kpm.cols() != dm.n)
        throw std::invalid_argument("closest_pair: cross gram dimension mismatch");

    ClosestPair cp;
    cp.alpha_plus = dp.ball.beta;
    cp.alpha_minus = dm.ball.beta;
    double last = pair_dist_sq(dp, dm, Kpm, cp.alpha_plus, cp.alpha_minus);

    std::size_t it = 0;
    for (; it < max_iter; ++it) {
        cp.alpha_minus = project_onto_hyperdisk(dm, Kpm.transpose() * cp.alpha_plus);
        cp.alpha_plus = project_onto_hyperdisk(dp, Kpm * cp.alpha_minus);
        const double cur = pair_dist_sq(dp, dm, Kpm, cp.alpha_plus, cp.alpha_minus);
        if (last - cur < tol) {
            last = std::min(cur, last);
            cp.converged = true;
            ++it;
            break;
        }
        last = cur;
    }
    cp.iterations = it;
    cp.dist_sq = std::max(last, 0.0);
    return cp;
}

}  // namespace

ClosestPair closest_pair(const Hyperdisk& disk_plus, const Hyperdisk& disk_minus,
                         const Eigen::MatrixXd& cross_gram, double tol, std::size_t max_iter) {
    ClosestPair cp = closest_pair_impl(disk_plus, disk_minus, cross_gram, tol, max_iter);
    if (std::sqrt(cp.dist_sq) < overlap_tolerance(disk_plus, disk_minus))
        throw OverlapError(std::sqrt(cp.dist_sq));
    if (!cp.converged) throw ClosestPairMaxIterError(std::move(cp));
    return cp;
}

bool hyperdisk_overlap(const Hyperdisk& disk_plus, const Hyperdisk& disk_minus,
                       const Eigen::MatrixXd& cross_gram) {
    const ClosestPair cp = closest_pair_impl(disk_plus, disk_minus, cross_gram, 1e-12, 20000);
    return std::sqrt(cp.dist_sq) < overlap_tolerance(disk_plus, disk_minus);
}

}  // namespace qlmc
