#pragma once

#include <Eigen/Core>

#include <string>
#include <vector>

#include "qlmc/hyperdisk.hpp"
#include "qlmc/kernel.hpp"

namespace qlmc {

struct HyperParams {
    KernelSpec kernel;
    double B = 1.0;          // gravity-center weight, > -1; 0 recovers LMC-HD
    double C = 1.0;          // ball softness, <= 1 shrinks the ball past outliers
    double rank_tol = 1e-8;  // affine-hull eigenvalue cutoff, relative to lambda_max
    double qp_tol = 1e-6;
    double cp_tol = 1e-12;
    std::size_t cp_max_iter = 20000;

    void validate() const;
};

// Maximum-margin separator between the two class hyperdisks. The decision
// function is f(z) = a+'k+(z) - a-'k-(z) + b with k the kernel vectors of z
// against the retained class samples; f = 0 halfway between the closest
// pair.
struct BinaryModel {
    Eigen::MatrixXd support_plus;   // class samples, one row per sample
    Eigen::MatrixXd support_minus;
    Eigen::VectorXd alpha_plus;     // closest-pair affine coefficients
    Eigen::VectorXd alpha_minus;
    double b = 0.0;
    KernelSpec kernel;
    double margin = 0.0;  // feature-space distance between the disks
};

enum class MulticlassStrategy { OAO, OAR };

struct MulticlassModel {
    struct Member {
        int positive_class = -1;  // index into class_names
        int negative_class = -1;  // -1 means "rest" (OAR)
        BinaryModel model;
        double c_used = 0.0;      // effective C after any overlap retries
        int retries = 0;
    };
    MulticlassStrategy strategy = MulticlassStrategy::OAO;
    std::vector<std::string> class_names;
    std::vector<Member> members;
    HyperParams params;
};

BinaryModel fit_binary(const Eigen::Ref<const Eigen::MatrixXd>& X_plus,
                       const Eigen::Ref<const Eigen::MatrixXd>& X_minus,
                       const HyperParams& params);

double decision_value(const BinaryModel& model, const Eigen::Ref<const Eigen::VectorXd>& z);
Eigen::VectorXd decision_values(const BinaryModel& model,
                                const Eigen::Ref<const Eigen::MatrixXd>& Z);

// +1 or -1; an exact zero goes to +1.
int predict(const BinaryModel& model, const Eigen::Ref<const Eigen::VectorXd>& z);

// labels[i] names the class of row i of X. Members that hit an overlap are
// retried with C halved, up to three times.
MulticlassModel fit_multiclass(const Eigen::Ref<const Eigen::MatrixXd>& X,
                               const std::vector<std::string>& labels,
                               MulticlassStrategy strategy, const HyperParams& params);

std::string predict_multiclass(const MulticlassModel& model,
                               const Eigen::Ref<const Eigen::VectorXd>& z);
std::vector<std::string> predict_multiclass_batch(const MulticlassModel& model,
                                                  const Eigen::Ref<const Eigen::MatrixXd>& Z);

}  // namespace qlmc
