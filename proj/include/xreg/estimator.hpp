#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "xreg/dataset.hpp"
#include "xreg/kernels.hpp"

namespace xreg {

/// What to do when a singular kernel meets a training point at zero
/// combined distance from the query.
enum class ExactMatchPolicy {
    return_mean_of_matches,  // mean response over the zero-distance points
    error,                   // throw SingularityError
};

std::string to_string(ExactMatchPolicy p);
ExactMatchPolicy exact_match_policy_from_string(const std::string& name);

struct PredictionCurve {
    std::vector<std::vector<double>> grid;
    std::vector<double> values;
    KernelSpec kernel;
    ExactMatchPolicy policy = ExactMatchPolicy::return_mean_of_matches;
};

/// Pointwise estimate Z = sum w_i y_i / sum w_i with w_i = w(x - x_i), the
/// minimizer of sum w_i (Z - y_i)^2. Sums run in dataset order with
/// compensated accumulation.
///
/// Throws DegenerateError when every weight underflows to zero.
double predict_at(std::span<const double> x, const Dataset& dataset, const KernelSpec& kernel,
                  ExactMatchPolicy policy = ExactMatchPolicy::return_mean_of_matches);

/// predict_at over every grid point; results are ordered by grid index for
/// any `threads`. Errors carry the offending grid index.
PredictionCurve predict_grid(std::vector<std::vector<double>> grid, const Dataset& dataset,
                             const KernelSpec& kernel,
                             ExactMatchPolicy policy = ExactMatchPolicy::return_mean_of_matches,
                             unsigned threads = 1);

/// Leave-one-out predictions: e_i is predict_at(x_i) on the data without
/// sample i. Requires n >= 2.
std::vector<double> predict_loo(const Dataset& dataset, const KernelSpec& kernel,
                                ExactMatchPolicy policy = ExactMatchPolicy::return_mean_of_matches,
                                unsigned threads = 1);

/// Cartesian product grid: one axis of values per dimension, last axis fastest.
std::vector<std::vector<double>> product_grid(const std::vector<std::vector<double>>& axes);

/// CSV with columns d1..db, z.
std::string curve_to_csv(const PredictionCurve& curve);
void write_curve_csv(const PredictionCurve& curve, const std::filesystem::path& path);

}  // namespace xreg
