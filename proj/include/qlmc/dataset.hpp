#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace qlmc {

class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Dataset {
    Eigen::MatrixXd X;                     // n x d feature matrix
    std::vector<int> y;                    // class index per row
    std::vector<std::string> class_names;  // sorted; y indexes into this
    std::string name;

    Eigen::Index n() const { return X.rows(); }
    Eigen::Index dim() const { return X.cols(); }
    int class_count() const { return static_cast<int>(class_names.size()); }
    std::string label(Eigen::Index row) const { return class_names[static_cast<std::size_t>(y[static_cast<std::size_t>(row)])]; }
    std::vector<std::string> labels() const;
    void validate() const;
};

enum class DatasetFormat { Delimited, SparseIndex };

struct LoadOptions {
    DatasetFormat format = DatasetFormat::Delimited;
    char delimiter = ',';
    int label_column = -1;  // -1 = last column (delimited only)
    std::string name;       // defaults to the file stem
};

// Delimited: one sample per line, numeric features, label token in the
// designated column. SparseIndex: "label idx:val idx:val ..." with 1-based
// indices; absent indices are zero. Rows keep file order.
Dataset load_dataset(const std::string& path, const LoadOptions& options = {});

struct Standardizer {
    Eigen::VectorXd mean;
    Eigen::VectorXd std;  // zero-variance features hold 0 and map to 0

    Eigen::MatrixXd apply(const Eigen::Ref<const Eigen::MatrixXd>& X) const;
};

Standardizer fit_standardizer(const Dataset& train);

// z-scores every dataset with the train statistics, in place.
void standardize(Dataset& train, std::vector<Dataset*> others = {});

struct SplitResult {
    Dataset train;
    Dataset test;
    std::vector<std::string> warnings;
};

// Seeded stratified split: each class is shuffled and divided at the ratio
// with the fractional remainder going to train. A single-sample class goes
// entirely to train with a warning.
SplitResult holdout_split(const Dataset& data, double ratio, std::uint64_t seed);

// Flips exactly round(fraction * n) labels, chosen without replacement,
// each to a uniformly random different class.
Dataset inject_label_noise(const Dataset& data, double fraction, std::uint64_t seed);

// Adds zero-mean Gaussian noise with per-feature standard deviation
// level * ref_std. ref_std defaults to the dataset's own per-feature std.
Dataset inject_feature_noise(const Dataset& data, double level, std::uint64_t seed);
Dataset inject_feature_noise(const Dataset& data, double level, std::uint64_t seed,
                             const Eigen::Ref<const Eigen::VectorXd>& ref_std);

}  // namespace qlmc
