#include "qlmc/model_io.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace qlmc {

namespace {

using nlohmann::json;

constexpr int kFormatVersion = 1;

json to_json(const Eigen::VectorXd& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
    return out;
}

json to_json(const Eigen::MatrixXd& m) {
    json out = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        out.push_back(std::move(row));
    }
    return out;
}

Eigen::VectorXd vector_from_json(const json& j) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = j[static_cast<std::size_t>(i)].get<double>();
    return v;
}

Eigen::MatrixXd matrix_from_json(const json& j) {
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = rows ? static_cast<Eigen::Index>(j[0].size()) : 0;
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index k = 0; k < cols; ++k)
            m(i, k) = j[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)].get<double>();
    return m;
}

json kernel_to_json(const KernelSpec& k) {
    return json{{"family", k.family == KernelFamily::RBF ? "rbf" : "linear"}, {"sigma", k.sigma}};
}

KernelSpec kernel_from_json(const json& j) {
    KernelSpec k;
    const auto fam = j.at("family").get<std::string>();
    if (fam == "rbf")
        k.family = KernelFamily::RBF;
    else if (fam == "linear")
        k.family = KernelFamily::Linear;
    else
        throw std::runtime_error("model: unknown kernel family '" + fam + "'");
    k.sigma = j.at("sigma").get<double>();
    return k;
}

json binary_to_json(const BinaryModel& m) {
    return json{{"support_plus", to_json(m.support_plus)},
                {"support_minus", to_json(m.support_minus)},
                {"alpha_plus", to_json(m.alpha_plus)},
                {"alpha_minus", to_json(m.alpha_minus)},
                {"b", m.b},
                {"kernel", kernel_to_json(m.kernel)},
                {"margin", m.margin}};
}

BinaryModel binary_from_json(const json& j) {
    BinaryModel m;
    m.support_plus = matrix_from_json(j.at("support_plus"));
    m.support_minus = matrix_from_json(j.at("support_minus"));
    m.alpha_plus = vector_from_json(j.at("alpha_plus"));
    m.alpha_minus = vector_from_json(j.at("alpha_minus"));
    m.b = j.at("b").get<double>();
    m.kernel = kernel_from_json(j.at("kernel"));
    m.margin = j.at("margin").get<double>();
    return m;
}

json params_to_json(const HyperParams& p) {
    return json{{"kernel", kernel_to_json(p.kernel)}, {"B", p.B},
                {"C", p.C},                           {"rank_tol", p.rank_tol},
                {"qp_tol", p.qp_tol},                 {"cp_tol", p.cp_tol},
                {"cp_max_iter", p.cp_max_iter}};
}

HyperParams params_from_json(const json& j) {
    HyperParams p;
    p.kernel = kernel_from_json(j.at("kernel"));
    p.B = j.at("B").get<double>();
    p.C = j.at("C").get<double>();
    p.rank_tol = j.at("rank_tol").get<double>();
    p.qp_tol = j.at("qp_tol").get<double>();
    p.cp_tol = j.at("cp_tol").get<double>();
    p.cp_max_iter = j.at("cp_max_iter").get<std::size_t>();
    return p;
}

}  // namespace

std::vector<std::string> TrainedModel::predict(const Eigen::Ref<const Eigen::MatrixXd>& X) const {
    if (standardizer) return predict_multiclass_batch(model, standardizer->apply(X));
    return predict_multiclass_batch(model, X);
}

std::string model_to_json(const TrainedModel& tm) {
    json members = json::array();
    for (const auto& member : tm.model.members)
        members.push_back(json{{"positive_class", member.positive_class},
                               {"negative_class", member.negative_class},
                               {"model", binary_to_json(member.model)},
                               {"c_used", member.c_used},
                               {"retries", member.retries}});
    json doc{{"format_version", kFormatVersion},
             {"strategy", tm.model.strategy == MulticlassStrategy::OAO ? "oao" : "oar"},
             {"class_names", tm.model.class_names},
             {"params", params_to_json(tm.model.params)},
             {"members", std::move(members)}};
    if (tm.standardizer)
        doc["standardizer"] = json{{"mean", to_json(tm.standardizer->mean)},
                                   {"std", to_json(tm.standardizer->std)}};
    return doc.dump(2);
}

TrainedModel model_from_json(const std::string& text) {
    const json doc = json::parse(text);
    const int version = doc.at("format_version").get<int>();
    if (version != kFormatVersion)
        throw std::runtime_error("model: unsupported format_version " + std::to_string(version));

    TrainedModel tm;
    tm.model.strategy = doc.at("strategy").get<std::string>() == "oar" ? MulticlassStrategy::OAR
                                                                       : MulticlassStrategy::OAO;
    tm.model.class_names = doc.at("class_names").get<std::vector<std::string>>();
    tm.model.params = params_from_json(doc.at("params"));
    for (const auto& jm : doc.at("members")) {
        MulticlassModel::Member member;
        member.positive_class = jm.at("positive_class").get<int>();
        member.negative_class = jm.at("negative_class").get<int>();
        member.model = binary_from_json(jm.at("model"));
        member.c_used = jm.at("c_used").get<double>();
        member.retries = jm.at("retries").get<int>();
        tm.model.members.push_back(std::move(member));
    }
    if (doc.contains("standardizer")) {
        Standardizer s;
        s.mean = vector_from_json(doc.at("standardizer").at("mean"));
        s.std = vector_from_json(doc.at("standardizer").at("std"));
        tm.standardizer = std::move(s);
    }
    return tm;
}

void save_model(const TrainedModel& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write model file '" + path + "'");
    out << model_to_json(model) << '\n';
}

TrainedModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read model file '" + path + "'");
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return model_from_json(text);
}

}  // namespace qlmc
