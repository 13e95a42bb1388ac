#include "xreg/lasso.hpp"

#include <algorithm>
#include <cmath>

#include "xreg/error.hpp"
#include "xreg/numeric.hpp"

namespace xreg {

namespace {

double soft_threshold(double v, double lambda) {
    if (v > lambda) return v - lambda;
    if (v < -lambda) return v + lambda;
    return 0.0;
}

// Standardized polynomial design for one-dimensional data.
struct Design {
    std::size_t n = 0;
    std::size_t degree = 0;
    std::vector<double> means;
    std::vector<double> scales;
    std::vector<std::vector<double>> z;  // z[p][i]
};

Design make_design(const Dataset& ds, std::size_t degree) {
    Design d;
    d.n = ds.size();
    d.degree = degree;
    d.z.assign(degree, std::vector<double>(d.n));
    for (std::size_t i = 0; i < d.n; ++i) {
        const double x = ds.x(i)[0];
        double power = 1.0;
        for (std::size_t p = 0; p < degree; ++p) {
            power *= x;
            d.z[p][i] = power;
        }
    }
    for (std::size_t p = 0; p < degree; ++p) {
        const double m = mean(d.z[p]);
        const double s = std::sqrt(population_variance(d.z[p]));
        if (!(s > 0.0) || !std::isfinite(s))
            throw DegenerateError("polynomial feature x^" + std::to_string(p + 1) + " has zero variance");
        for (double& v : d.z[p]) v = (v - m) / s;
        d.means.push_back(m);
        d.scales.push_back(s);
    }
    return d;
}

double dot_mean(const std::vector<double>& a, std::span<const double> b) {
    CompensatedSum s;
    for (std::size_t i = 0; i < a.size(); ++i) s.add(a[i] * b[i]);
    return s.value() / static_cast<double>(a.size());
}

}  // namespace

LassoModel fit_lasso(const Dataset& dataset, std::size_t degree, double lambda, const LassoOptions& options) {
    if (dataset.dimension() != 1) throw ValidationError("polynomial lasso supports one predictor only");
    if (degree < 1) throw ValidationError("lasso degree must be >= 1");
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ValidationError("lasso lambda must be finite and >= 0");
    if (!options.warm_start.empty() && options.warm_start.size() != degree)
        throw ValidationError("warm start length must equal the degree");

    const Design d = make_design(dataset, degree);
    const double y_mean = mean(dataset.responses());
    std::vector<double> yc(d.n);
    for (std::size_t i = 0; i < d.n; ++i) yc[i] = dataset.y(i) - y_mean;

    std::vector<std::vector<double>> gram(degree, std::vector<double>(degree));
    std::vector<double> cross(degree);
    for (std::size_t j = 0; j < degree; ++j) {
        cross[j] = dot_mean(d.z[j], yc);
        for (std::size_t k = 0; k <= j; ++k) gram[j][k] = gram[k][j] = dot_mean(d.z[j], d.z[k]);
    }
    const double yy = dot_mean(yc, yc);

    auto objective = [&](const std::vector<double>& beta) {
        double quad = 0.0;
        double lin = 0.0;
        double l1 = 0.0;
        for (std::size_t j = 0; j < degree; ++j) {
            lin += cross[j] * beta[j];
            l1 += std::abs(beta[j]);
            for (std::size_t k = 0; k < degree; ++k) quad += beta[j] * gram[j][k] * beta[k];
        }
        return 0.5 * (yy - 2.0 * lin + quad) + lambda * l1;
    };

    std::vector<double> beta = options.warm_start.empty() ? std::vector<double>(degree, 0.0) : options.warm_start;
    LassoModel model;
    model.degree = degree;
    model.lambda = lambda;
    model.underdetermined = d.n <= degree;

    while (model.iterations < options.max_iter) {
        double max_change = 0.0;
        for (std::size_t j = 0; j < degree; ++j) {
            double rho = cross[j];
            for (std::size_t k = 0; k < degree; ++k)
                if (k != j) rho -= gram[j][k] * beta[k];
            const double updated = soft_threshold(rho, lambda) / gram[j][j];
            max_change = std::max(max_change, std::abs(updated - beta[j]));
            beta[j] = updated;
        }
        ++model.iterations;
        if (options.on_sweep) options.on_sweep(model.iterations, objective(beta));
        if (max_change <= options.tol) {
            model.converged = true;
            break;
        }
    }

    model.feature_means = d.means;
    model.feature_scales = d.scales;
    model.standardized_slopes = beta;
    model.response_mean = y_mean;
    model.coefficients.assign(degree + 1, 0.0);
    double intercept = y_mean;
    for (std::size_t p = 0; p < degree; ++p) {
        model.coefficients[p + 1] = beta[p] / d.scales[p];
        intercept -= beta[p] * d.means[p] / d.scales[p];
    }
    model.coefficients[0] = intercept;
    for (double c : model.coefficients)
        if (!std::isfinite(c)) throw DegenerateError("lasso produced non-finite coefficients");
    return model;
}

double predict_lasso(const LassoModel& model, double x) {
    double acc = 0.0;
    for (auto it = model.coefficients.rbegin(); it != model.coefficients.rend(); ++it) acc = acc * x + *it;
    return acc;
}

double lasso_objective(const LassoModel& model, const Dataset& dataset) {
    CompensatedSum rss;
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        const double x = dataset.x(i)[0];
        double fit = model.response_mean;
        double power = 1.0;
        for (std::size_t p = 0; p < model.degree; ++p) {
            power *= x;
            fit += model.standardized_slopes[p] * (power - model.feature_means[p]) / model.feature_scales[p];
        }
        const double r = dataset.y(i) - fit;
        rss.add(r * r);
    }
    double l1 = 0.0;
    for (double b : model.standardized_slopes) l1 += std::abs(b);
    return rss.value() / (2.0 * static_cast<double>(dataset.size())) + model.lambda * l1;
}

LambdaSelection select_lambda(const Dataset& dataset, std::size_t degree, std::span<const double> lambda_grid,
                              std::size_t k_folds, double tol, std::size_t max_iter) {
    if (k_folds < 2) throw ValidationError("k_folds must be >= 2");
    if (lambda_grid.empty()) throw ValidationError("lambda grid must not be empty");
    if (k_folds > dataset.size())
        throw ValidationError("fold with < 1 sample: " + std::to_string(k_folds) + " folds for " +
                              std::to_string(dataset.size()) + " samples");

    LambdaSelection sel;
    sel.grid.assign(lambda_grid.begin(), lambda_grid.end());
    std::sort(sel.grid.begin(), sel.grid.end());
    for (double l : sel.grid)
        if (!(l >= 0.0) || !std::isfinite(l)) throw ValidationError("lambda grid values must be finite and >= 0");

    std::vector<CompensatedSum> abs_err(sel.grid.size());
    for (std::size_t fold = 0; fold < k_folds; ++fold) {
        std::vector<std::size_t> train;
        std::vector<std::size_t> test;
        for (std::size_t i = 0; i < dataset.size(); ++i) (i % k_folds == fold ? test : train).push_back(i);
        if (train.empty() || test.empty()) throw ValidationError("fold with < 1 sample");
        const Dataset train_ds = dataset.subset(train);

        // Largest lambda first so each fit warm-starts from a sparser solution.
        LassoOptions opts;
        opts.tol = tol;
        opts.max_iter = max_iter;
        for (std::size_t g = sel.grid.size(); g-- > 0;) {
            const LassoModel model = fit_lasso(train_ds, degree, sel.grid[g], opts);
            opts.warm_start = model.standardized_slopes;
            for (std::size_t i : test) abs_err[g].add(std::abs(predict_lasso(model, dataset.x(i)[0]) - dataset.y(i)));
        }
    }

    sel.cv_errors.resize(sel.grid.size());
    std::size_t best = 0;
    for (std::size_t g = 0; g < sel.grid.size(); ++g) {
        sel.cv_errors[g] = abs_err[g].value() / static_cast<double>(dataset.size());
        if (sel.cv_errors[g] <= sel.cv_errors[best]) best = g;
    }
    sel.lambda = sel.grid[best];
    sel.cv_error = sel.cv_errors[best];
    return sel;
}

std::vector<double> log_grid(double lo, double hi, std::size_t count) {
    if (!(lo > 0.0) || !(hi >= lo)) throw ValidationError("log grid needs 0 < lo <= hi");
    auto v = linspace(std::log(lo), std::log(hi), count);
    for (double& x : v) x = std::exp(x);
    if (!v.empty()) {
        v.front() = lo;
        v.back() = hi;
    }
    return v;
}

}  // namespace xreg
