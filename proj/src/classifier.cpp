#include "qlmc/classifier.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>

namespace qlmc {

void HyperParams::validate() const {
    kernel.validate();
    if (!(B > -1.0)) throw std::invalid_argument("HyperParams: B must be > -1");
    if (!(C > 0.0)) throw std::invalid_argument("HyperParams: C must be positive");
    if (!(rank_tol >= 0.0)) throw std::invalid_argument("HyperParams: rank_tol must be >= 0");
}

BinaryModel fit_binary(const Eigen::Ref<const Eigen::MatrixXd>& X_plus,
                       const Eigen::Ref<const Eigen::MatrixXd>& X_minus,
                       const HyperParams& params) {
    params.validate();
    if (X_plus.rows() == 0 || X_minus.rows() == 0)
        throw std::invalid_argument("fit_binary: both classes must be non-empty");
    if (X_plus.cols() != X_minus.cols())
        throw std::invalid_argument("fit_binary: feature dimension mismatch");

    auto Kp = std::make_shared<Eigen::MatrixXd>(gram(params.kernel, X_plus));
    auto Km = std::make_shared<Eigen::MatrixXd>(gram(params.kernel, X_minus));
    const Eigen::MatrixXd Kpm = gram_cross(params.kernel, X_plus, X_minus);

    const Hyperdisk dp = build_hyperdisk(Kp, params.B, params.C, params.qp_tol, params.rank_tol);
    const Hyperdisk dm = build_hyperdisk(Km, params.B, params.C, params.qp_tol, params.rank_tol);
    const ClosestPair cp = closest_pair(dp, dm, Kpm, params.cp_tol, params.cp_max_iter);

    BinaryModel model;
    model.support_plus = X_plus;
    model.support_minus = X_minus;
    model.alpha_plus = cp.alpha_plus;
    model.alpha_minus = cp.alpha_minus;
    model.kernel = params.kernel;
    model.margin = std::sqrt(cp.dist_sq);
    model.b = -(cp.alpha_plus.dot(*Kp * cp.alpha_plus) -
                cp.alpha_minus.dot(*Km * cp.alpha_minus)) /
              2.0;
    return model;
}

Eigen::VectorXd decision_values(const BinaryModel& model,
                                const Eigen::Ref<const Eigen::MatrixXd>& Z) {
    if (Z.cols() != model.support_plus.cols())
        throw std::invalid_argument("decision_values: feature dimension mismatch");
    const Eigen::MatrixXd kp = gram_cross(model.kernel, Z, model.support_plus);
    const Eigen::MatrixXd km = gram_cross(model.kernel, Z, model.support_minus);
    return (kp * model.alpha_plus - km * model.alpha_minus).array() + model.b;
}

double decision_value(const BinaryModel& model, const Eigen::Ref<const Eigen::VectorXd>& z) {
    return decision_values(model, z.transpose())[0];
}

int predict(const BinaryModel& model, const Eigen::Ref<const Eigen::VectorXd>& z) {
    return decision_value(model, z) >= 0.0 ? +1 : -1;
}

namespace {

Eigen::MatrixXd select_rows(const Eigen::Ref<const Eigen::MatrixXd>& X,
                            const std::vector<Eigen::Index>& rows) {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), X.cols());
    for (Eigen::Index i = 0; i < out.rows(); ++i) out.row(i) = X.row(rows[i]);
    return out;
}

// Overlap remedy: halve C (keeping the ball fit feasible) up to three times.
MulticlassModel::Member fit_member(const Eigen::MatrixXd& Xp, const Eigen::MatrixXd& Xm,
                                   const HyperParams& base, int pos, int neg) {
    const double c_floor =
        1.0 / static_cast<double>(std::min(Xp.rows(), Xm.rows()));
    HyperParams params = base;
    MulticlassModel::Member member;
    member.positive_class = pos;
    member.negative_class = neg;
    for (int attempt = 0;; ++attempt) {
        try {
            member.model = fit_binary(Xp, Xm, params);
            member.c_used = params.C;
            member.retries = attempt;
            return member;
        } catch (const OverlapError&) {
            if (attempt >= 3 || params.C <= c_floor) throw;
            params.C = std::max(params.C / 2.0, c_floor);
        }
    }
}

}  // namespace

MulticlassModel fit_multiclass(const Eigen::Ref<const Eigen::MatrixXd>& X,
                               const std::vector<std::string>& labels,
                               MulticlassStrategy strategy, const HyperParams& params) {
    params.validate();
    if (static_cast<std::size_t>(X.rows()) != labels.size())
        throw std::invalid_argument("fit_multiclass: X/labels size mismatch");

    // deterministic class order: lexicographic
    const std::set<std::string> unique(labels.begin(), labels.end());
    MulticlassModel model;
    model.strategy = strategy;
    model.params = params;
    model.class_names.assign(unique.begin(), unique.end());
    const int c = static_cast<int>(model.class_names.size());
    if (c < 2) throw std::invalid_argument("fit_multiclass: need at least 2 classes");

    std::map<std::string, int> index;
    for (int i = 0; i < c; ++i) index[model.class_names[i]] = i;
    std::vector<std::vector<Eigen::Index>> by_class(c);
    for (Eigen::Index r = 0; r < X.rows(); ++r)
        by_class[index[labels[r]]].push_back(r);

    if (strategy == MulticlassStrategy::OAO) {
        for (int i = 0; i < c; ++i) {
            const Eigen::MatrixXd Xi = select_rows(X, by_class[i]);
            for (int j = i + 1; j < c; ++j)
                model.members.push_back(
                    fit_member(Xi, select_rows(X, by_class[j]), params, i, j));
        }
    } else {
        for (int i = 0; i < c; ++i) {
            std::vector<Eigen::Index> rest;
            for (int j = 0; j < c; ++j)
                if (j != i) rest.insert(rest.end(), by_class[j].begin(), by_class[j].end());
            std::sort(rest.begin(), rest.end());
            model.members.push_back(
                fit_member(select_rows(X, by_class[i]), select_rows(X, rest), params, i, -1));
        }
    }
    return model;
}

std::vector<std::string> predict_multiclass_batch(const MulticlassModel& model,
                                                  const Eigen::Ref<const Eigen::MatrixXd>& Z) {
    const Eigen::Index m = Z.rows();
    const int c = static_cast<int>(model.class_names.size());
    Eigen::MatrixXd votes = Eigen::MatrixXd::Zero(m, c);
    Eigen::MatrixXd scores = Eigen::MatrixXd::Zero(m, c);

    for (const auto& member : model.members) {
        const Eigen::VectorXd v = decision_values(member.model, Z);
        if (model.strategy == MulticlassStrategy::OAO) {
            for (Eigen::Index r = 0; r < m; ++r) {
                if (v[r] >= 0.0)
                    votes(r, member.positive_class) += 1.0;
                else
                    votes(r, member.negative_class) += 1.0;
                scores(r, member.positive_class) += v[r];
                scores(r, member.negative_class) -= v[r];
            }
        } else {
            scores.col(member.positive_class) += v;
        }
    }

    std::vector<std::string> out(static_cast<std::size_t>(m));
    for (Eigen::Index r = 0; r < m; ++r) {
        int best = 0;
        if (model.strategy == MulticlassStrategy::OAO) {
            // majority vote; ties broken by the summed decision values,
            // remaining ties by class order
            double best_votes = votes(r, 0), best_score = scores(r, 0);
            for (int k = 1; k < c; ++k) {
                if (votes(r, k) > best_votes ||
                    (votes(r, k) == best_votes && scores(r, k) > best_score)) {
                    best = k;
                    best_votes = votes(r, k);
                    best_score = scores(r, k);
                }
            }
        } else {
            double best_score = scores(r, 0);
            for (int k = 1; k < c; ++k) {
                if (scores(r, k) > best_score) {
                    best = k;
                    best_score = scores(r, k);
                }
            }
        }
        out[static_cast<std::size_t>(r)] = model.class_names[static_cast<std::size_t>(best)];
    }
    return out;
}

std::string predict_multiclass(const MulticlassModel& model,
                               const Eigen::Ref<const Eigen::VectorXd>& z) {
    return predict_multiclass_batch(model, z.transpose())[0];
}

}  // namespace qlmc
