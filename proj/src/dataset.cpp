#include "qlmc/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "qlmc/random.hpp"

namespace qlmc {

std::vector<std::string> Dataset::labels() const {
    std::vector<std::string> out;
    out.reserve(y.size());
    for (int idx : y) out.push_back(class_names[static_cast<std::size_t>(idx)]);
    return out;
}

void Dataset::validate() const {
    if (X.rows() < 1) throw DataError("dataset '" + name + "' is empty");
    if (static_cast<std::size_t>(X.rows()) != y.size())
        throw DataError("dataset '" + name + "': feature/label count mismatch");
    for (int idx : y)
        if (idx < 0 || idx >= class_count())
            throw DataError("dataset '" + name + "': label index out of range");
    if (!X.allFinite()) throw DataError("dataset '" + name + "' contains non-finite features");
}

namespace {

std::vector<std::string> split_tokens(const std::string& line, char delim) {
    std::vector<std::string> out;
    std::string token;
    std::istringstream ss(line);
    while (std::getline(ss, token, delim)) out.push_back(token);
    return out;
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

double parse_number(const std::string& tok, const std::string& path, std::size_t line_no) {
    const std::string t = trim(tok);
    try {
        std::size_t used = 0;
        const double v = std::stod(t, &used);
        if (used != t.size()) throw std::invalid_argument(t);
        return v;
    } catch (const std::exception&) {
        throw DataError(path + ":" + std::to_string(line_no) + ": non-numeric feature '" + t + "'");
    }
}

Dataset finalize(std::vector<std::vector<double>> rows, std::vector<std::string> raw_labels,
                 std::string name, const std::string& path) {
    if (rows.empty()) throw DataError(path + ": no samples");
    const std::size_t d = rows[0].size();
    for (std::size_t i = 0; i < rows.size(); ++i)
        if (rows[i].size() != d)
            throw DataError(path + ": inconsistent feature count at sample " + std::to_string(i + 1));

    Dataset ds;
    ds.name = std::move(name);
    ds.X.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < d; ++j) ds.X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];

    const std::set<std::string> unique(raw_labels.begin(), raw_labels.end());
    ds.class_names.assign(unique.begin(), unique.end());
    std::map<std::string, int> index;
    for (std::size_t i = 0; i < ds.class_names.size(); ++i)
        index[ds.class_names[i]] = static_cast<int>(i);
    ds.y.reserve(raw_labels.size());
    for (const auto& lab : raw_labels) ds.y.push_back(index[lab]);
    ds.validate();
    return ds;
}

Dataset load_delimited(const std::string& path, const LoadOptions& opt, std::string name) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path + "'");

    std::vector<std::vector<double>> rows;
    std::vector<std::string> labels;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto tokens = split_tokens(line, opt.delimiter);
        if (tokens.size() < 2)
            throw DataError(path + ":" + std::to_string(line_no) + ": malformed line");
        const int ncols = static_cast<int>(tokens.size());
        int label_col = opt.label_column < 0 ? ncols + opt.label_column : opt.label_column;
        if (label_col < 0 || label_col >= ncols)
            throw DataError(path + ":" + std::to_string(line_no) + ": label column out of range");

        std::vector<double> feats;
        feats.reserve(tokens.size() - 1);
        for (int i = 0; i < ncols; ++i)
            if (i != label_col) feats.push_back(parse_number(tokens[static_cast<std::size_t>(i)], path, line_no));
        rows.push_back(std::move(feats));
        labels.push_back(trim(tokens[static_cast<std::size_t>(label_col)]));
    }
    return finalize(std::move(rows), std::move(labels), std::move(name), path);
}

Dataset load_sparse(const std::string& path, std::string name) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path + "'");

    std::vector<std::vector<std::pair<int, double>>> entries;
    std::vector<std::string> labels;
    int max_index = 0;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        std::istringstream ss(t);
        std::string label;
        ss >> label;
        if (label.empty())
            throw DataError(path + ":" + std::to_string(line_no) + ": malformed line");
        std::vector<std::pair<int, double>> row;
        std::string pair;
        while (ss >> pair) {
            const auto colon = pair.find(':');
            if (colon == std::string::npos)
                throw DataError(path + ":" + std::to_string(line_no) + ": expected index:value, got '" + pair + "'");
            int idx = 0;
            try {
                idx = std::stoi(pair.substr(0, colon));
            } catch (const std::exception&) {
                throw DataError(path + ":" + std::to_string(line_no) + ": bad index in '" + pair + "'");
            }
            if (idx < 1)
                throw DataError(path + ":" + std::to_string(line_no) + ": indices are 1-based");
            row.emplace_back(idx - 1, parse_number(pair.substr(colon + 1), path, line_no));
            max_index = std::max(max_index, idx);
        }
        entries.push_back(std::move(row));
        labels.push_back(label);
    }
    if (entries.empty()) throw DataError(path + ": no samples");

    std::vector<std::vector<double>> rows(entries.size(), std::vector<double>(static_cast<std::size_t>(max_index), 0.0));
    for (std::size_t i = 0; i < entries.size(); ++i)
        for (const auto& [idx, val] : entries[i]) rows[i][static_cast<std::size_t>(idx)] = val;
    return finalize(std::move(rows), std::move(labels), std::move(name), path);
}

}  // namespace

Dataset load_dataset(const std::string& path, const LoadOptions& options) {
    std::string name = options.name;
    if (name.empty()) name = std::filesystem::path(path).stem().string();
    if (options.format == DatasetFormat::Delimited)
        return load_delimited(path, options, std::move(name));
    return load_sparse(path, std::move(name));
}

Eigen::MatrixXd Standardizer::apply(const Eigen::Ref<const Eigen::MatrixXd>& X) const {
    if (X.cols() != mean.size())
        throw std::invalid_argument("Standardizer: dimension mismatch");
    Eigen::MatrixXd out = X.rowwise() - mean.transpose();
    for (Eigen::Index j = 0; j < out.cols(); ++j) {
        if (std[j] > 0.0)
            out.col(j) /= std[j];
        else
            out.col(j).setZero();
    }
    return out;
}

Standardizer fit_standardizer(const Dataset& train) {
    train.validate();
    Standardizer s;
    s.mean = train.X.colwise().mean();
    const Eigen::MatrixXd centered = train.X.rowwise() - s.mean.transpose();
    s.std = (centered.array().square().colwise().mean()).sqrt();
    for (Eigen::Index j = 0; j < s.std.size(); ++j)
        if (!(s.std[j] > 0.0)) s.std[j] = 0.0;
    return s;
}

void standardize(Dataset& train, std::vector<Dataset*> others) {
    const Standardizer s = fit_standardizer(train);
    train.X = s.apply(train.X);
    for (Dataset* d : others)
        if (d) d->X = s.apply(d->X);
}

SplitResult holdout_split(const Dataset& data, double ratio, std::uint64_t seed) {
    data.validate();
    if (!(ratio > 0.0 && ratio < 1.0))
        throw std::invalid_argument("holdout_split: ratio must be in (0,1)");

    Rng rng(seed);
    SplitResult out;
    std::vector<Eigen::Index> train_rows, test_rows;
    for (int c = 0; c < data.class_count(); ++c) {
        std::vector<Eigen::Index> rows;
        for (Eigen::Index r = 0; r < data.n(); ++r)
            if (data.y[static_cast<std::size_t>(r)] == c) rows.push_back(r);
        if (rows.size() == 1) {
            out.warnings.push_back("class '" + data.class_names[static_cast<std::size_t>(c)] +
                                   "' has a single sample; kept in train");
            train_rows.push_back(rows[0]);
            continue;
        }
        rng.shuffle(rows);
        const auto n_train = static_cast<std::size_t>(
            std::ceil(ratio * static_cast<double>(rows.size()) - 1e-12));
        for (std::size_t i = 0; i < rows.size(); ++i)
            (i < n_train ? train_rows : test_rows).push_back(rows[i]);
    }
    std::sort(train_rows.begin(), train_rows.end());
    std::sort(test_rows.begin(), test_rows.end());
    if (train_rows.empty() || test_rows.empty())
        throw DataError("holdout_split: a side of the split is empty at ratio " + std::to_string(ratio));

    auto take = [&](const std::vector<Eigen::Index>& rows, const std::string& suffix) {
        Dataset d;
        d.name = data.name + suffix;
        d.class_names = data.class_names;
        d.X.resize(static_cast<Eigen::Index>(rows.size()), data.dim());
        d.y.reserve(rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            d.X.row(static_cast<Eigen::Index>(i)) = data.X.row(rows[i]);
            d.y.push_back(data.y[static_cast<std::size_t>(rows[i])]);
        }
        return d;
    };
    out.train = take(train_rows, "/train");
    out.test = take(test_rows, "/test");
    return out;
}

Dataset inject_label_noise(const Dataset& data, double fraction, std::uint64_t seed) {
    data.validate();
    if (!(fraction >= 0.0 && fraction < 1.0))
        throw std::invalid_argument("inject_label_noise: fraction must be in [0,1)");
    if (data.class_count() < 2)
        throw std::invalid_argument("inject_label_noise: need at least 2 classes");

    Dataset out = data;
    const auto n = static_cast<std::size_t>(data.n());
    const auto flips = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
    if (flips == 0) return out;

    std::vector<std::size_t> rows(n);
    for (std::size_t i = 0; i < n; ++i) rows[i] = i;
    Rng rng(seed);
    rng.shuffle(rows);
    const int c = data.class_count();
    for (std::size_t i = 0; i < flips; ++i) {
        const std::size_t r = rows[i];
        const int offset = 1 + static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(c - 1)));
        out.y[r] = (out.y[r] + offset) % c;
    }
    return out;
}

Dataset inject_feature_noise(const Dataset& data, double level, std::uint64_t seed,
                             const Eigen::Ref<const Eigen::VectorXd>& ref_std) {
    data.validate();
    if (!(level >= 0.0)) throw std::invalid_argument("inject_feature_noise: level must be >= 0");
    if (ref_std.size() != data.dim())
        throw std::invalid_argument("inject_feature_noise: ref_std dimension mismatch");

    Dataset out = data;
    if (level == 0.0) return out;
    Rng rng(seed);
    for (Eigen::Index i = 0; i < out.X.rows(); ++i)
        for (Eigen::Index j = 0; j < out.X.cols(); ++j)
            out.X(i, j) += rng.normal() * level * ref_std[j];
    return out;
}

Dataset inject_feature_noise(const Dataset& data, double level, std::uint64_t seed) {
    const Standardizer s = fit_standardizer(data);
    return inject_feature_noise(data, level, seed, s.std);
}

}  // namespace qlmc
