#pragma once

#include <optional>
#include <string>

#include "qlmc/classifier.hpp"
#include "qlmc/dataset.hpp"

namespace qlmc {

// What cmd_train produces: the fitted multiclass model plus the feature
// transform applied before fitting, so predictions on raw inputs round-trip.
struct TrainedModel {
    MulticlassModel model;
    std::optional<Standardizer> standardizer;

    std::vector<std::string> predict(const Eigen::Ref<const Eigen::MatrixXd>& X) const;
};

void save_model(const TrainedModel& model, const std::string& path);
TrainedModel load_model(const std::string& path);

std::string model_to_json(const TrainedModel& model);
TrainedModel model_from_json(const std::string& text);

}  // namespace qlmc
