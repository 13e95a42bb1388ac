#include "xreg/distance_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "xreg/error.hpp"
#include "xreg/numeric.hpp"

namespace xreg {

namespace {

double predictor_sq_distance(std::span<const double> x, std::span<const double> xi) {
    double s = 0.0;
    for (std::size_t a = 0; a < x.size(); ++a) {
        const double d = x[a] - xi[a];
        s += d * d;
    }
    return s;
}

void check_query(std::span<const double> x, const Dataset& ds) {
    if (x.size() != ds.dimension())
        throw ValidationError("query has dimension " + std::to_string(x.size()) + ", dataset has " +
                              std::to_string(ds.dimension()));
}

}  // namespace

double euclid_cost(std::span<const double> x, double z, const Dataset& dataset) {
    check_query(x, dataset);
    CompensatedSum total;
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        const double dz = z - dataset.y(i);
        total.add(std::sqrt(predictor_sq_distance(x, dataset.x(i)) + dz * dz));
    }
    return total.value();
}

double fixed_point_update(std::span<const double> x, double z, const Dataset& dataset) {
    check_query(x, dataset);
    std::vector<double> inv(dataset.size());
    CompensatedSum den;
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        const double dz = z - dataset.y(i);
        inv[i] = 1.0 / std::max(kDistanceFloor, std::sqrt(predictor_sq_distance(x, dataset.x(i)) + dz * dz));
        den.add(inv[i]);
    }
    const double total = den.value();
    CompensatedSum num;
    for (std::size_t i = 0; i < dataset.size(); ++i) num.add(dataset.y(i) * (inv[i] / total));
    return num.value();
}

Stationarity stationarity(std::span<const double> x, double z, const Dataset& dataset) {
    check_query(x, dataset);
    CompensatedSum grad;
    CompensatedSum inv;
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        const double dz = z - dataset.y(i);
        const double d = std::max(kDistanceFloor, std::sqrt(predictor_sq_distance(x, dataset.x(i)) + dz * dz));
        grad.add(dz / d);
        inv.add(1.0 / d);
    }
    return {grad.value(), inv.value()};
}

SolveResult solve_fixed_point(std::span<const double> x, const Dataset& dataset, double tol,
                              std::size_t max_iter) {
    if (!(tol > 0.0)) throw ValidationError("fixed-point tolerance must be > 0");
    if (max_iter < 1) throw ValidationError("fixed-point max_iter must be >= 1");
    check_query(x, dataset);

    SolveResult res;
    res.z = mean(dataset.responses());
    res.residual = std::numeric_limits<double>::infinity();
    while (res.iterations < max_iter) {
        const double next = fixed_point_update(x, res.z, dataset);
        res.residual = std::abs(next - res.z);
        res.z = next;
        ++res.iterations;
        if (res.residual <= tol) {
            res.converged = true;
            break;
        }
    }
    return res;
}

SolveResult solve_gradient(const std::function<double(double)>& objective, double init, double step,
                           double tol, std::size_t max_iter) {
    if (!(step > 0.0)) throw ValidationError("gradient step must be > 0");
    if (!(tol > 0.0)) throw ValidationError("gradient tolerance must be > 0");

    auto eval = [&](double z) {
        const double f = objective(z);
        if (!std::isfinite(f)) throw Error("objective is not finite at z = " + format_double(z));
        return f;
    };
    auto gradient = [&](double z) {
        const double h = 1e-6 * std::max(1.0, std::abs(z));
        return (eval(z + h) - eval(z - h)) / (2.0 * h);
    };

    SolveResult res;
    res.z = init;
    double f = eval(res.z);
    double current_step = step;
    double g = gradient(res.z);
    res.residual = std::abs(g);

    while (res.residual > tol && res.iterations < max_iter) {
        ++res.iterations;
        double trial = res.z - current_step * g;
        double f_trial = objective(trial);
        int halvings = 0;
        while (!(std::isfinite(f_trial) && f_trial <= f) && halvings < 80) {
            current_step *= 0.5;
            trial = res.z - current_step * g;
            f_trial = objective(trial);
            ++halvings;
        }
        if (!(std::isfinite(f_trial) && f_trial <= f) || trial == res.z) break;  // no descent possible
        res.z = trial;
        f = f_trial;
        current_step = std::min(step, current_step * 2.0);
        g = gradient(res.z);
        res.residual = std::abs(g);
    }
    res.converged = res.residual <= tol;
    return res;
}

}  // namespace xreg
