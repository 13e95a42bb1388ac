#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "xreg/dataset.hpp"
#include "xreg/estimator.hpp"
#include "xreg/kernels.hpp"
#include "xreg/lasso.hpp"
#include "xreg/tuning.hpp"

namespace xreg {

double mae(std::span<const double> pred, std::span<const double> target);
double rmse(std::span<const double> pred, std::span<const double> target);

/// (err_base / err_new - 1) * 100. Requires err_new > 0.
double percent_advantage(double err_base, double err_new);

struct Split {
    Dataset train;
    Dataset test;
    std::vector<std::size_t> train_indices;
    std::vector<std::size_t> test_indices;
};

/// Fisher-Yates shuffle driven by SplitMix64(seed); the first
/// max(1, floor(n * test_fraction)) shuffled indices form the test part.
Split split(const Dataset& dataset, double test_fraction, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Benchmark configuration

enum class TuningMode { none, variance, iterate, two_param };
std::string to_string(TuningMode m);
TuningMode tuning_mode_from_string(const std::string& name);

struct DataConfig {
    std::optional<SynthSpec> synthetic;  // set for synthetic suites
    std::string csv_path;                // otherwise a CSV file
    std::string response_column = "y";
    double test_fraction = 0.3;
    std::uint64_t split_seed = 0;
    NormalizeMode normalize = NormalizeMode::none;
};

struct XAxisConfig {
    KernelSpec kernel = KernelSpec::exp_base(2.0);  // family and starting parameters
    TuningMode tuning = TuningMode::iterate;
    RBounds r_bounds{};
    double explained_fraction = 1.0;
    std::size_t max_rounds = 20;
    double damping = 0.5;
    double q_lo = 0.0;
    double q_hi = 100.0;
    double lambda_var = 0.7;
    double lambda_fit = 0.3;
    ExactMatchPolicy policy = ExactMatchPolicy::return_mean_of_matches;
};

struct LassoConfig {
    std::size_t degree = 5;
    std::optional<double> lambda;  // fixed lambda; CV over the grid when unset
    double lambda_min = 1e-4;
    double lambda_max = 10.0;
    std::size_t lambda_count = 20;
    std::size_t k_folds = 5;
    double tol = 1e-10;
    std::size_t max_iter = 200000;
};

struct EvalConfig {
    std::size_t grid_points = 512;
    double edge_fraction = 0.02;
};

struct BenchConfig {
    DataConfig data;
    std::vector<std::string> methods{"xaxis", "lasso"};
    XAxisConfig xaxis;
    LassoConfig lasso;
    EvalConfig eval;
    unsigned threads = 1;
};

void to_json(nlohmann::json& j, const BenchConfig& c);
void from_json(const nlohmann::json& j, BenchConfig& c);

/// Reads a config file; a relative csv_path resolves against the file's directory.
BenchConfig load_bench_config(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Report

struct Metrics {
    double mae = 0.0;
    double rmse = 0.0;
    std::size_t count = 0;
};

struct MethodResult {
    std::string name;
    Metrics metrics;       // headline (interior points)
    Metrics edge_metrics;  // edge points; count 0 when there are none
    double runtime_seconds = 0.0;
    std::vector<double> predictions;  // one per evaluation point
    nlohmann::json details;           // kernel/tuning or lasso model
};

struct BenchmarkReport {
    static constexpr int kSchemaVersion = 1;
    BenchConfig config;
    std::string data_source;  // "synthetic" or "csv"
    std::string file_hash;    // fnv1a64 of the CSV bytes, csv runs only
    std::size_t n_train = 0;
    std::vector<std::vector<double>> eval_points;
    std::vector<double> targets;
    std::vector<bool> interior;
    std::vector<MethodResult> methods;
    std::optional<double> percent_advantage;  // lasso MAE vs x-axis MAE

    const MethodResult* method(const std::string& name) const;
};

/// Runs the configured methods. Errors are rethrown with a stage label
/// (data, tune, fit, eval).
BenchmarkReport run_benchmark(const BenchConfig& config);

/// Headline and edge metrics of `predictions` against the report's targets.
std::pair<Metrics, Metrics> score(const BenchmarkReport& report, std::span<const double> predictions);

/// Largest absolute difference between stored metrics (and percent
/// advantage) and the values recomputed from stored predictions.
double consistency_error(const BenchmarkReport& report);

nlohmann::json report_to_json(const BenchmarkReport& report, const std::string& predictions_file);
std::string predictions_to_csv(const BenchmarkReport& report);

/// Writes the JSON report and its predictions sidecar CSV.
void write_report(const BenchmarkReport& report, const std::filesystem::path& json_path,
                  const std::filesystem::path& csv_path);

/// Reads a report written by write_report, including the sidecar predictions.
BenchmarkReport load_report(const std::filesystem::path& json_path);

std::string fnv1a64_hex(std::string_view bytes);

}  // namespace xreg
