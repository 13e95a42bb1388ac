#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "xreg/dataset.hpp"

namespace xreg {

/// Polynomial lasso fit. `coefficients` are in the original basis,
/// intercept first: y = c0 + c1 x + ... + c_degree x^degree.
struct LassoModel {
    std::size_t degree = 1;
    double lambda = 0.0;
    std::vector<double> coefficients;
    std::vector<double> feature_means;   // of x^p, p = 1..degree
    std::vector<double> feature_scales;  // population standard deviations
    std::vector<double> standardized_slopes;
    double response_mean = 0.0;
    bool converged = false;
    std::size_t iterations = 0;  // coordinate-descent sweeps
    bool underdetermined = false;  // n <= degree
};

struct LassoOptions {
    double tol = 1e-10;         // on the largest standardized coefficient change per sweep
    std::size_t max_iter = 200000;
    std::vector<double> warm_start;  // standardized slopes; empty for zeros
    // Called after each sweep with the standardized objective value.
    std::function<void(std::size_t sweep, double objective)> on_sweep;
};

/// Features x^p (p = 1..degree) standardized to zero mean and unit population
/// variance; cyclic coordinate descent with soft thresholding on
/// RSS / (2n) + lambda * |slopes|_1, intercept unpenalized.
/// Requires b = 1. Throws DegenerateError for a constant feature column.
LassoModel fit_lasso(const Dataset& dataset, std::size_t degree, double lambda, const LassoOptions& options = {});

double predict_lasso(const LassoModel& model, double x);

/// The lasso objective of `model` on `dataset` in the standardized basis.
double lasso_objective(const LassoModel& model, const Dataset& dataset);

struct LambdaSelection {
    double lambda = 0.0;
    double cv_error = 0.0;
    std::vector<double> grid;       // ascending
    std::vector<double> cv_errors;  // per grid entry
};

/// k-fold cross-validated MAE per lambda; sample i belongs to fold i mod k.
/// Lowest error wins, ties go to the larger lambda.
LambdaSelection select_lambda(const Dataset& dataset, std::size_t degree, std::span<const double> lambda_grid,
                              std::size_t k_folds, double tol = 1e-10, std::size_t max_iter = 200000);

/// `count` values log-spaced from lo to hi inclusive.
std::vector<double> log_grid(double lo, double hi, std::size_t count);

}  // namespace xreg
