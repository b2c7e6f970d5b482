// qlmc: train, evaluate, and run noise sweeps for the hyperdisk classifier.
//
// Exit codes: 0 success, 1 usage error, 2 training failure, 3 data error.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "qlmc/eval.hpp"
#include "qlmc/model_io.hpp"

namespace {

using nlohmann::json;

constexpr const char* kVersion = "0.1.0";

struct CommonOpts {
    std::string dataset_path;
    std::string format = "delimited";
    std::string delimiter = ",";
    int label_column = -1;
    std::string kernel = "rbf";
    double sigma = 1.0;
    double B = 1.0;
    double C = 1.0;
    double rank_tol = 1e-8;
    std::string strategy = "oao";
    double split_ratio = 0.5;
    int repetitions = 10;
    std::uint64_t seed = 0;
    double label_noise = 0.0;
    double feature_noise = 0.0;
    bool no_standardize = false;
    int threads = 0;
};

void add_data_options(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--data", o.dataset_path, "dataset file")->required();
    cmd->add_option("--format", o.format, "delimited|sparse")
        ->check(CLI::IsMember({"delimited", "sparse"}));
    cmd->add_option("--delimiter", o.delimiter, "field delimiter (delimited format)");
    cmd->add_option("--label-column", o.label_column,
                    "label column index; negative counts from the end (default: last)");
}

void add_hyper_options(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--kernel", o.kernel, "kernel family")->check(CLI::IsMember({"linear", "rbf"}));
    cmd->add_option("--sigma", o.sigma, "rbf width");
    cmd->add_option("--B", o.B, "gravity-center weight (> -1); 0 gives LMC-HD");
    cmd->add_option("--C", o.C, "ball softness bound");
    cmd->add_option("--rank-tol", o.rank_tol, "affine hull eigenvalue cutoff");
    cmd->add_option("--strategy", o.strategy, "multiclass strategy")
        ->check(CLI::IsMember({"oao", "oar"}));
    cmd->add_flag("--no-standardize", o.no_standardize, "skip per-feature z-scoring");
}

void add_eval_options(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--split-ratio", o.split_ratio, "train fraction per repetition");
    cmd->add_option("--repetitions,-k", o.repetitions, "holdout repetitions");
    cmd->add_option("--seed", o.seed, "base random seed");
    cmd->add_option("--label-noise", o.label_noise, "fraction of train labels flipped");
    cmd->add_option("--feature-noise", o.feature_noise,
                    "Gaussian level relative to per-feature train std");
    cmd->add_option("--threads", o.threads, "worker threads (0 = auto)");
}

std::string resolve_data_path(const std::string& path) {
    namespace fs = std::filesystem;
    if (fs::exists(path)) return path;
    if (const char* dir = std::getenv("QLMC_DATA_DIR")) {
        const auto joined = fs::path(dir) / path;
        if (fs::exists(joined)) return joined.string();
    }
    return path;  // let the loader produce the error
}

qlmc::Dataset load(const CommonOpts& o) {
    qlmc::LoadOptions opt;
    opt.format = o.format == "sparse" ? qlmc::DatasetFormat::SparseIndex
                                      : qlmc::DatasetFormat::Delimited;
    if (o.delimiter.size() != 1) throw qlmc::DataError("delimiter must be a single character");
    opt.delimiter = o.delimiter[0];
    opt.label_column = o.label_column;
    return qlmc::load_dataset(resolve_data_path(o.dataset_path), opt);
}

qlmc::HyperParams hyper_params(const CommonOpts& o) {
    qlmc::HyperParams p;
    p.kernel = o.kernel == "rbf" ? qlmc::KernelSpec::rbf(o.sigma) : qlmc::KernelSpec::linear();
    p.B = o.B;
    p.C = o.C;
    p.rank_tol = o.rank_tol;
    return p;
}

qlmc::ExperimentConfig experiment_config(const CommonOpts& o) {
    qlmc::ExperimentConfig cfg;
    cfg.params = hyper_params(o);
    cfg.strategy = o.strategy == "oar" ? qlmc::MulticlassStrategy::OAR
                                       : qlmc::MulticlassStrategy::OAO;
    cfg.split_ratio = o.split_ratio;
    cfg.repetitions = o.repetitions;
    cfg.seed = o.seed;
    cfg.label_noise = o.label_noise;
    cfg.feature_noise = o.feature_noise;
    cfg.standardize = !o.no_standardize;
    cfg.threads = o.threads;
    return cfg;
}

// FNV-1a over the file bytes; ties every result row to its input data
std::string file_fingerprint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw qlmc::DataError("cannot open '" + path + "' for fingerprinting");
    std::uint64_t h = 1469598103934665603ULL;
    char c;
    while (in.get(c)) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ULL;
    }
    std::ostringstream out;
    out << std::hex << std::setw(16) << std::setfill('0') << h;
    return out.str();
}

json manifest_json(const CommonOpts& o, const qlmc::Dataset& ds, const std::string& data_path) {
    const auto now = std::chrono::system_clock::now();
    const auto time = std::chrono::system_clock::to_time_t(now);
    std::ostringstream stamp;
    stamp << std::put_time(std::gmtime(&time), "%FT%TZ");
    return json{{"artifact_version", kVersion},
                {"timestamp", stamp.str()},
                {"dataset",
                 {{"path", data_path},
                  {"fingerprint", file_fingerprint(data_path)},
                  {"samples", ds.n()},
                  {"features", ds.dim()},
                  {"classes", ds.class_count()}}},
                {"config",
                 {{"kernel", o.kernel},
                  {"sigma", o.sigma},
                  {"B", o.B},
                  {"C", o.C},
                  {"rank_tol", o.rank_tol},
                  {"strategy", o.strategy},
                  {"split_ratio", o.split_ratio},
                  {"repetitions", o.repetitions},
                  {"seed", o.seed},
                  {"label_noise", o.label_noise},
                  {"feature_noise", o.feature_noise},
                  {"standardize", !o.no_standardize},
                  {"mode", o.B == 0.0 ? "LMC-HD" : "QLMC-HD"}}}};
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << text;
}

std::string results_header() {
    return "dataset,method,kernel,sigma,B,C,noise_kind,noise_level,repetitions,"
           "accuracy_mean,accuracy_std,failed,seed\n";
}

std::string results_row(const std::string& dataset, const std::string& method,
                        const CommonOpts& o, const std::string& noise_kind, double noise_level,
                        double B, const qlmc::Metrics& m) {
    std::ostringstream row;
    row << dataset << ',' << method << ',' << o.kernel << ',' << o.sigma << ',' << B << ','
        << o.C << ',' << noise_kind << ',' << noise_level << ',' << o.repetitions << ','
        << std::setprecision(17) << m.accuracy_mean << ',' << m.accuracy_std << ','
        << m.failures.size() << ',' << o.seed << '\n';
    return row.str();
}

void print_metrics_line(const std::string& dataset, const std::string& method,
                        const qlmc::Metrics& m, int repetitions) {
    std::ostringstream line;
    line << dataset << "  " << method << "  " << std::fixed << std::setprecision(1)
         << m.accuracy_mean << "±" << m.accuracy_std;
    if (repetitions == 1) line << "  (single repetition: std is 0)";
    if (!m.failures.empty()) line << "  [" << m.failures.size() << " failed repetitions]";
    std::cout << line.str() << '\n';
}

int cmd_train(const CommonOpts& o, const std::string& model_path,
              const std::string& manifest_path) {
    const std::string data_path = resolve_data_path(o.dataset_path);
    const qlmc::Dataset ds = load(o);

    qlmc::TrainedModel tm;
    Eigen::MatrixXd X = ds.X;
    if (!o.no_standardize) {
        tm.standardizer = qlmc::fit_standardizer(ds);
        X = tm.standardizer->apply(X);
    }
    tm.model = qlmc::fit_multiclass(X, ds.labels(),
                                    o.strategy == "oar" ? qlmc::MulticlassStrategy::OAR
                                                        : qlmc::MulticlassStrategy::OAO,
                                    hyper_params(o));
    qlmc::save_model(tm, model_path);

    json manifest = manifest_json(o, ds, data_path);
    manifest["model_file"] = model_path;
    manifest["members"] = tm.model.members.size();
    write_text(manifest_path, manifest.dump(2) + "\n");
    std::cout << "trained " << tm.model.members.size() << " member(s) -> " << model_path << '\n';
    return 0;
}

int cmd_predict(const std::string& model_path, const CommonOpts& o,
                const std::string& out_path) {
    const qlmc::TrainedModel tm = qlmc::load_model(model_path);

    // an empty input file is an empty prediction set, not an error
    const std::string data_path = resolve_data_path(o.dataset_path);
    {
        std::ifstream probe(data_path);
        if (!probe) throw qlmc::DataError("cannot open '" + data_path + "'");
        std::string line;
        bool any = false;
        while (std::getline(probe, line))
            if (line.find_first_not_of(" \t\r\n") != std::string::npos) {
                any = true;
                break;
            }
        if (!any) {
            write_text(out_path, "");
            return 0;
        }
    }

    const qlmc::Dataset ds = load(o);
    const auto predictions = tm.predict(ds.X);
    std::ostringstream out;
    for (const auto& label : predictions) out << label << '\n';
    write_text(out_path, out.str());
    std::cout << "wrote " << predictions.size() << " predictions -> " << out_path << '\n';
    return 0;
}

int cmd_eval(const CommonOpts& o, const std::string& results_path,
             const std::string& manifest_path) {
    const std::string data_path = resolve_data_path(o.dataset_path);
    const qlmc::Dataset ds = load(o);
    const qlmc::ExperimentConfig cfg = experiment_config(o);
    const qlmc::Metrics m = qlmc::repeated_holdout_eval(ds, cfg);

    const std::string method = o.B == 0.0 ? "LMC-HD" : "QLMC-HD";
    print_metrics_line(ds.name, method, m, o.repetitions);

    if (!results_path.empty())
        write_text(results_path,
                   results_header() + results_row(ds.name, method, o, "none", 0.0, o.B, m));
    if (!manifest_path.empty())
        write_text(manifest_path, manifest_json(o, ds, data_path).dump(2) + "\n");
    return 0;
}

int cmd_noise_sweep(const CommonOpts& o, const std::string& noise_kind,
                    const std::vector<double>& levels, const std::string& results_path,
                    const std::string& manifest_path) {
    const std::string data_path = resolve_data_path(o.dataset_path);
    const qlmc::Dataset ds = load(o);

    std::string rows = results_header();
    for (const double level : levels) {
        for (const double B : {o.B, 0.0}) {
            CommonOpts run = o;
            run.B = B;
            run.label_noise = noise_kind == "label" ? level : 0.0;
            run.feature_noise = noise_kind == "feature" ? level : 0.0;
            const qlmc::Metrics m = qlmc::repeated_holdout_eval(ds, experiment_config(run));
            const std::string method = B == 0.0 ? "LMC-HD" : "QLMC-HD";
            std::cout << noise_kind << " " << std::setprecision(3) << level << "  ";
            print_metrics_line(ds.name, method, m, o.repetitions);
            rows += results_row(ds.name, method, run, noise_kind, level, B, m);
            if (o.B == 0.0) break;  // both methods coincide, one row is enough
        }
    }
    if (!results_path.empty()) write_text(results_path, rows);
    if (!manifest_path.empty())
        write_text(manifest_path, manifest_json(o, ds, data_path).dump(2) + "\n");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Large-margin classification between class hyperdisks"};
    app.set_config("--config", "", "key=value config file; flags override");
    app.require_subcommand(1);

    CommonOpts opts;
    std::string model_path = "model.json";
    std::string manifest_path = "manifest.json";
    std::string results_path;
    std::string out_path = "predictions.txt";
    std::string noise_kind = "label";
    std::vector<double> levels{0.05, 0.10, 0.15};

    auto* train = app.add_subcommand("train", "fit a model on a full dataset");
    add_data_options(train, opts);
    add_hyper_options(train, opts);
    train->add_option("--out", model_path, "model output file");
    train->add_option("--manifest", manifest_path, "manifest output file");

    auto* eval = app.add_subcommand("eval", "repeated holdout evaluation");
    add_data_options(eval, opts);
    add_hyper_options(eval, opts);
    add_eval_options(eval, opts);
    eval->add_option("--out", results_path, "results file (delimited)");
    eval->add_option("--manifest", manifest_path, "manifest output file");

    auto* sweep = app.add_subcommand("noise-sweep", "accuracy vs noise level, with B=0 baseline");
    add_data_options(sweep, opts);
    add_hyper_options(sweep, opts);
    add_eval_options(sweep, opts);
    sweep->add_option("--noise", noise_kind, "noise kind")
        ->check(CLI::IsMember({"label", "feature"}));
    sweep->add_option("--levels", levels, "noise levels to sweep");
    sweep->add_option("--out", results_path, "results file (delimited)");
    sweep->add_option("--manifest", manifest_path, "manifest output file");

    auto* predict = app.add_subcommand("predict", "label new samples with a saved model");
    predict->add_option("--model", model_path, "model file")->required();
    add_data_options(predict, opts);
    predict->add_option("--out", out_path, "predictions output file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (train->parsed()) return cmd_train(opts, model_path, manifest_path);
        if (eval->parsed()) return cmd_eval(opts, results_path, manifest_path);
        if (sweep->parsed())
            return cmd_noise_sweep(opts, noise_kind, levels, results_path, manifest_path);
        if (predict->parsed()) return cmd_predict(model_path, opts, out_path);
    } catch (const qlmc::DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return 3;
    } catch (const qlmc::OverlapError& e) {
        std::cerr << "training failed: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 1;
}
