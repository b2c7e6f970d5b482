#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qlmc/classifier.hpp"
#include "qlmc/dataset.hpp"

namespace qlmc {

struct ExperimentConfig {
    HyperParams params;
    MulticlassStrategy strategy = MulticlassStrategy::OAO;
    double split_ratio = 0.5;
    int repetitions = 10;
    std::uint64_t seed = 0;
    double label_noise = 0.0;    // fraction of train labels flipped
    double feature_noise = 0.0;  // Gaussian level, relative to per-feature train std
    bool standardize = true;
    int threads = 0;  // 0 = hardware concurrency

    void validate() const;
};

struct Metrics {
    double accuracy_mean = 0.0;  // percent
    double accuracy_std = 0.0;   // sample std over repetitions, percent
    std::vector<double> per_repetition;
    std::vector<std::string> failures;  // one entry per failed repetition
    double wall_time_sec = 0.0;
};

double accuracy(const std::vector<std::string>& predictions,
                const std::vector<std::string>& labels);

// One repetition: derived seed -> stratified split -> optional z-scoring ->
// optional label noise on train -> optional feature noise on train and test
// (scaled by the train std) -> fit -> accuracy on test.
Metrics repeated_holdout_eval(const Dataset& data, const ExperimentConfig& config);

}  // namespace qlmc
