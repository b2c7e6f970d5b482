#include "qlmc/eval.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "qlmc/random.hpp"

namespace qlmc {

void ExperimentConfig::validate() const {
    params.validate();
    if (!(split_ratio > 0.0 && split_ratio < 1.0))
        throw std::invalid_argument("ExperimentConfig: split_ratio must be in (0,1)");
    if (repetitions < 1) throw std::invalid_argument("ExperimentConfig: repetitions must be >= 1");
    if (!(label_noise >= 0.0 && label_noise < 1.0))
        throw std::invalid_argument("ExperimentConfig: label_noise must be in [0,1)");
    if (!(feature_noise >= 0.0))
        throw std::invalid_argument("ExperimentConfig: feature_noise must be >= 0");
}

double accuracy(const std::vector<std::string>& predictions,
                const std::vector<std::string>& labels) {
    if (predictions.size() != labels.size())
        throw std::invalid_argument("accuracy: length mismatch");
    if (labels.empty()) throw std::invalid_argument("accuracy: empty inputs");
    std::size_t correct = 0;
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (predictions[i] == labels[i]) ++correct;
    return 100.0 * static_cast<double>(correct) / static_cast<double>(labels.size());
}

namespace {

// seed streams within one repetition
enum : std::uint64_t { kSplitStream = 1, kLabelStream = 2, kFeatTrainStream = 3, kFeatTestStream = 4 };

double run_repetition(const Dataset& data, const ExperimentConfig& config, int rep) {
    const std::uint64_t rep_seed = derive_seed(config.seed, static_cast<std::uint64_t>(rep));

    SplitResult split = holdout_split(data, config.split_ratio, derive_seed(rep_seed, kSplitStream));
    if (config.standardize) standardize(split.train, {&split.test});

    if (config.label_noise > 0.0)
        split.train = inject_label_noise(split.train, config.label_noise,
                                         derive_seed(rep_seed, kLabelStream));
    if (config.feature_noise > 0.0) {
        const Eigen::VectorXd ref_std = fit_standardizer(split.train).std;
        split.train = inject_feature_noise(split.train, config.feature_noise,
                                           derive_seed(rep_seed, kFeatTrainStream), ref_std);
        split.test = inject_feature_noise(split.test, config.feature_noise,
                                          derive_seed(rep_seed, kFeatTestStream), ref_std);
    }

    const MulticlassModel model =
        fit_multiclass(split.train.X, split.train.labels(), config.strategy, config.params);
    return accuracy(predict_multiclass_batch(model, split.test.X), split.test.labels());
}

}  // namespace

Metrics repeated_holdout_eval(const Dataset& data, const ExperimentConfig& config) {
    config.validate();
    data.validate();
    const auto t0 = std::chrono::steady_clock::now();

    const int k = config.repetitions;
    std::vector<double> acc(static_cast<std::size_t>(k), std::nan(""));
    std::vector<std::string> errors(static_cast<std::size_t>(k));

    int threads = config.threads > 0 ? config.threads
                                     : static_cast<int>(std::thread::hardware_concurrency());
    threads = std::max(1, std::min(threads, k));

    auto worker = [&](int rep) {
        try {
            acc[static_cast<std::size_t>(rep)] = run_repetition(data, config, rep);
        } catch (const std::exception& e) {
            errors[static_cast<std::size_t>(rep)] =
                "repetition " + std::to_string(rep) + ": " + e.what();
        }
    };
    if (threads == 1) {
        for (int rep = 0; rep < k; ++rep) worker(rep);
    } else {
        // repetitions are independent given their derived seeds, so the
        // schedule cannot change any result; reduction below stays in order
        std::atomic<int> next{0};
        auto drain = [&] {
            for (int rep = next.fetch_add(1); rep < k; rep = next.fetch_add(1)) worker(rep);
        };
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        for (int t = 0; t < threads; ++t) pool.emplace_back(drain);
        for (auto& t : pool) t.join();
    }

    Metrics metrics;
    for (int rep = 0; rep < k; ++rep) {
        if (!errors[static_cast<std::size_t>(rep)].empty())
            metrics.failures.push_back(errors[static_cast<std::size_t>(rep)]);
        else
            metrics.per_repetition.push_back(acc[static_cast<std::size_t>(rep)]);
    }

    const auto& xs = metrics.per_repetition;
    if (!xs.empty()) {
        double sum = 0.0;
        for (double v : xs) sum += v;
        metrics.accuracy_mean = sum / static_cast<double>(xs.size());
        if (xs.size() > 1) {
            double ss = 0.0;
            for (double v : xs) ss += (v - metrics.accuracy_mean) * (v - metrics.accuracy_mean);
            metrics.accuracy_std = std::sqrt(ss / static_cast<double>(xs.size() - 1));
        }
    }
    metrics.wall_time_sec =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return metrics;
}

}  // namespace qlmc
