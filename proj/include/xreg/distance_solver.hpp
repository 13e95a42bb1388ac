#pragma once

#include <cstddef>
#include <functional>
#include <span>

#include "xreg/dataset.hpp"

namespace xreg {

struct SolveResult {
    double z = 0.0;
    std::size_t iterations = 0;
    double residual = 0.0;  // last step size (fixed point) or |gradient| (descent)
    bool converged = false;
};

// Floor applied to each distance d_i inside the fixed-point update.
inline constexpr double kDistanceFloor = 1e-12;

/// Sum over samples of sqrt(|x - x_i|^2 + (z - y_i)^2).
double euclid_cost(std::span<const double> x, double z, const Dataset& dataset);

/// One update z <- sum(y_i / d_i) / sum(1 / d_i) with d_i evaluated at z.
double fixed_point_update(std::span<const double> x, double z, const Dataset& dataset);

struct Stationarity {
    double gradient = 0.0;          // sum (z - y_i) / d_i
    double inverse_distances = 0.0;  // sum 1 / d_i
};
Stationarity stationarity(std::span<const double> x, double z, const Dataset& dataset);

/// Minimizes euclid_cost over z by fixed-point iteration from mean(y).
/// Stops when |z_{t+1} - z_t| <= tol. Non-convergence is reported through
/// `converged`, not thrown.
SolveResult solve_fixed_point(std::span<const double> x, const Dataset& dataset, double tol = 1e-10,
                              std::size_t max_iter = 10000);

/// Scalar gradient descent with a central finite-difference gradient
/// (h = 1e-6 * max(1, |z|)) and step halving whenever a step would raise the
/// objective. Stops when |gradient| <= tol. Throws Error if the objective is
/// non-finite at an iterate.
SolveResult solve_gradient(const std::function<double(double)>& objective, double init, double step,
                           double tol = 1e-8, std::size_t max_iter = 10000);

}  // namespace xreg
