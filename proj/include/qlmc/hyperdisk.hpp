#pragma once

#include <Eigen/Core>

#include <cmath>
#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>

#include "qlmc/qsvdd.hpp"

namespace qlmc {

// Rank-truncated pseudo-inverse of the doubly centered Gram, used to project
// onto the affine hull of a class in feature space. Directions whose
// eigenvalue falls below rank_tol * lambda_max are treated as noise and
// dropped.
struct AffineProjector {
    Eigen::MatrixXd basis;        // n x r eigenvectors of HKH
    Eigen::VectorXd inv_eigs;     // 1/lambda for the kept eigenvalues
    Eigen::VectorXd mean_kernel;  // s = K 1 / n
    Eigen::Index rank = 0;
};

// Class model: the affine hull of the training points intersected with the
// QSVDD ball. The ball center is itself an affine combination of the class
// points (sum beta = 1), which is what makes projection onto the
// intersection exact: project onto the hull, then shrink radially toward
// the center if outside the ball.
struct Hyperdisk {
    std::shared_ptr<const Eigen::MatrixXd> gram;
    QsvddModel ball;
    AffineProjector projector;
    Eigen::Index n = 0;

    double radius() const { return std::sqrt(std::max(ball.radius_sq, 0.0)); }
};

struct ClosestPair {
    Eigen::VectorXd alpha_plus;   // affine coefficients over the + class
    Eigen::VectorXd alpha_minus;  // affine coefficients over the - class
    double dist_sq = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
};

// Raised when the two hyperdisks intersect and no separating margin exists.
class OverlapError : public std::runtime_error {
public:
    explicit OverlapError(double dist)
        : std::runtime_error("hyperdisks overlap (closest-pair distance " + std::to_string(dist) +
                             "); use a smaller C or a different kernel"),
          distance(dist) {}
    double distance;
};

class ClosestPairMaxIterError : public std::runtime_error {
public:
    explicit ClosestPairMaxIterError(ClosestPair best)
        : std::runtime_error("closest_pair: max_iter reached without convergence"),
          best_iterate(std::move(best)) {}
    ClosestPair best_iterate;
};

Hyperdisk build_hyperdisk(std::shared_ptr<const Eigen::MatrixXd> gram, double B, double C,
                          double qp_tol = 1e-6, double rank_tol = 1e-8);

// Feature-space projection onto the hyperdisk of a point q given by its
// kernel vector k_q against the disk's class points. Returns affine
// coefficients c with sum(c) = 1.
Eigen::VectorXd project_onto_hyperdisk(const Hyperdisk& disk,
                                       const Eigen::Ref<const Eigen::VectorXd>& k_q);

// Scale-aware threshold below which the two disks are deemed intersecting.
double overlap_tolerance(const Hyperdisk& plus, const Hyperdisk& minus);

// Alternating projections between the two compact convex disks starting at
// the ball centers. cross_gram is the n+ x n- kernel block between the two
// classes. Throws OverlapError when the distance collapses below the
// overlap tolerance.
ClosestPair closest_pair(const Hyperdisk& disk_plus, const Hyperdisk& disk_minus,
                         const Eigen::MatrixXd& cross_gram, double tol = 1e-12,
                         std::size_t max_iter = 20000);

bool hyperdisk_overlap(const Hyperdisk& disk_plus, const Hyperdisk& disk_minus,
                       const Eigen::MatrixXd& cross_gram);

}  // namespace qlmc
