#pragma once

// Test-only reference computations. Each one follows a definition directly
// and shares no code path with the routine it checks.

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "xreg/dataset.hpp"
#include "xreg/random.hpp"

namespace oracle {

// Argmin of f over lo, lo + step, ..., hi.
inline double grid_argmin(const std::function<double(double)>& f, double lo, double hi, double step) {
    double best_z = lo;
    double best_f = std::numeric_limits<double>::infinity();
    const auto count = static_cast<long>(std::floor((hi - lo) / step + 0.5));
    for (long k = 0; k <= count; ++k) {
        const double z = lo + step * static_cast<double>(k);
        const double v = f(z);
        if (v < best_f) {
            best_f = v;
            best_z = z;
        }
    }
    return best_z;
}

// Golden-section minimizer of a unimodal f on [a, b].
inline double golden_min(const std::function<double(double)>& f, double a, double b, double tol) {
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - g * (b - a);
    double d = a + g * (b - a);
    double fc = f(c);
    double fd = f(d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

// Two-pass textbook population variance with plain summation.
inline double variance(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m += x;
    m /= static_cast<double>(v.size());
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return s / static_cast<double>(v.size());
}

// Exponential-kernel weighted average written out longhand for b = 1.
inline double exp_kernel_average(double x, const std::vector<double>& xs, const std::vector<double>& ys, double r,
                                 std::size_t skip = static_cast<std::size_t>(-1)) {
    double num = 0.0;
    double den = 0.0;
    for (std::size_t j = 0; j < xs.size(); ++j) {
        if (j == skip) continue;
        const double w = std::pow(r, -(x - xs[j]) * (x - xs[j]));
        num += w * ys[j];
        den += w;
    }
    return num / den;
}

inline std::vector<double> exp_kernel_loo(const std::vector<double>& xs, const std::vector<double>& ys, double r) {
    std::vector<double> e(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) e[i] = exp_kernel_average(xs[i], xs, ys, r, i);
    return e;
}

// Least squares polynomial coefficients (ascending powers) by normal equations.
inline std::vector<double> poly_least_squares(const std::vector<double>& xs, const std::vector<double>& ys,
                                              std::size_t degree) {
    Eigen::MatrixXd A(static_cast<Eigen::Index>(xs.size()), static_cast<Eigen::Index>(degree + 1));
    Eigen::VectorXd b(static_cast<Eigen::Index>(xs.size()));
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double p = 1.0;
        for (std::size_t d = 0; d <= degree; ++d) {
            A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(d)) = p;
            p *= xs[i];
        }
        b(static_cast<Eigen::Index>(i)) = ys[i];
    }
    const Eigen::VectorXd c = (A.transpose() * A).ldlt().solve(A.transpose() * b);
    return {c.data(), c.data() + c.size()};
}

// Small random 1-d dataset with distinct-ish x in [lo, hi].
inline xreg::Dataset random_dataset(std::uint64_t seed, std::size_t n, double lo = -3.0, double hi = 3.0) {
    xreg::SplitMix64 rng(seed);
    std::vector<double> x(n);
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = rng.uniform(lo, hi);
        y[i] = rng.uniform(-5.0, 5.0);
    }
    return xreg::Dataset::from_xy(std::move(x), std::move(y));
}

inline std::vector<double> column(const xreg::Dataset& ds, std::size_t a = 0) {
    std::vector<double> v;
    for (std::size_t i = 0; i < ds.size(); ++i) v.push_back(ds.x(i)[a]);
    return v;
}

inline std::vector<double> responses(const xreg::Dataset& ds) {
    return {ds.responses().begin(), ds.responses().end()};
}

}  // namespace oracle
