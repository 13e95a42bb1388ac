#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "xreg/error.hpp"
#include "xreg/lasso.hpp"
#include "xreg/serialization.hpp"

using namespace xreg;

TEST_CASE("fit_lasso examples") {
    SUBCASE("exact line, lambda 0") {
        const Dataset ds = Dataset::from_xy({0.0, 1.0, 2.0, 3.0, 5.0}, {1.0, 3.0, 5.0, 7.0, 11.0});
        const auto ref = oracle::poly_least_squares(oracle::column(ds), oracle::responses(ds), 1);
        CHECK(std::abs(ref[0] - 1.0) <= 1e-10);
        CHECK(std::abs(ref[1] - 2.0) <= 1e-10);
        const auto m = fit_lasso(ds, 1, 0.0);
        CHECK(m.converged);
        CHECK(std::abs(m.coefficients[0] - 1.0) <= 1e-8);
        CHECK(std::abs(m.coefficients[1] - 2.0) <= 1e-8);
    }
    SUBCASE("huge lambda shrinks every slope") {
        const Dataset ds = oracle::random_dataset(4, 40);
        const auto m = fit_lasso(ds, 5, 1e9);
        double mean = 0.0;
        for (double y : ds.responses()) mean += y;
        mean /= 40.0;
        for (std::size_t p = 1; p <= 5; ++p) CHECK(m.coefficients[p] == 0.0);
        CHECK(m.coefficients[0] == doctest::Approx(mean).epsilon(1e-12));
    }
    SUBCASE("exact parabola, degree 3") {
        const Dataset ds = Dataset::from_xy({-2.0, -1.0, 0.0, 1.0, 2.0}, {4.0, 1.0, 0.0, 1.0, 4.0});
        const auto ref = oracle::poly_least_squares(oracle::column(ds), oracle::responses(ds), 3);
        const auto m = fit_lasso(ds, 3, 0.0);
        const double expect[] = {0.0, 0.0, 1.0, 0.0};
        for (std::size_t p = 0; p < 4; ++p) {
            CHECK(std::abs(ref[p] - expect[p]) <= 1e-9);
            CHECK(std::abs(m.coefficients[p] - expect[p]) <= 1e-6);
        }
        CHECK(std::abs(predict_lasso(m, 1.5) - 2.25) <= 1e-5);
    }
    SUBCASE("constant predictor is rejected") {
        CHECK_THROWS_AS(fit_lasso(Dataset::from_xy({1.0, 1.0, 1.0}, {1.0, 2.0, 3.0}), 2, 0.1), DegenerateError);
    }
    SUBCASE("non-convergence is reported") {
        const Dataset ds = oracle::random_dataset(9, 30);
        LassoOptions o;
        o.max_iter = 2;
        CHECK_FALSE(fit_lasso(ds, 5, 1e-6, o).converged);
    }
    SUBCASE("multi-dimensional data is rejected") {
        const Dataset ds(2, {0.0, 1.0, 2.0, 3.0}, {1.0, 2.0});
        CHECK_THROWS_AS(fit_lasso(ds, 2, 0.0), ValidationError);
    }
}

TEST_CASE("predict_lasso") {
    LassoModel m;
    m.degree = 1;
    m.coefficients = {1.0, 2.0};
    CHECK(predict_lasso(m, 3.0) == 7.0);
    m.degree = 3;
    m.coefficients = {0.0, 0.0, 0.0, 0.0};
    for (double x : {-5.0, 0.0, 2.5}) CHECK(predict_lasso(m, x) == 0.0);
}

TEST_CASE("select_lambda") {
    SUBCASE("singleton grid") {
        const Dataset ds = oracle::random_dataset(2, 30);
        const double grid[] = {0.0};
        const auto s = select_lambda(ds, 3, grid, 5);
        CHECK(s.lambda == 0.0);
        CHECK(s.cv_errors.size() == 1);
        CHECK(s.cv_error == s.cv_errors[0]);
    }
    SUBCASE("pure noise prefers the largest lambda") {
        const Dataset ds = oracle::random_dataset(77, 60);
        const auto grid = log_grid(1e-4, 10.0, 20);
        const auto s = select_lambda(ds, 5, grid, 5);
        CHECK(s.lambda == grid.back());
        for (double e : s.cv_errors) CHECK(s.cv_error <= e);
    }
    SUBCASE("exact line prefers the smallest lambda reaching 1e-6") {
        std::vector<double> x;
        std::vector<double> y;
        for (int i = 0; i < 40; ++i) {
            x.push_back(0.05 * i);
            y.push_back(3.0 - 1.5 * x.back());
        }
        const Dataset ds = Dataset::from_xy(x, y);
        const double grid[] = {0.0, 1e-9, 1e-3, 0.1, 1.0};
        const auto s = select_lambda(ds, 1, grid, 5);
        CHECK(s.cv_error <= 1e-6);
        // Every grid value up to the selected one also reaches 1e-6 and the
        // selection is the best of those.
        for (std::size_t i = 0; i < s.grid.size(); ++i)
            if (s.cv_errors[i] <= 1e-6) CHECK(s.cv_error <= s.cv_errors[i]);
        CHECK(s.lambda <= 1e-9);
    }
    SUBCASE("validation") {
        const Dataset ds = oracle::random_dataset(2, 10);
        const double grid[] = {0.1};
        CHECK_THROWS_AS(select_lambda(ds, 2, grid, 1), ValidationError);
        CHECK_THROWS_AS(select_lambda(ds, 2, std::span<const double>{}, 3), ValidationError);
        const double neg[] = {-1.0};
        CHECK_THROWS_AS(select_lambda(ds, 2, neg, 3), ValidationError);
    }
}

TEST_CASE("log_grid") {
    const auto g = log_grid(1e-4, 10.0, 6);
    REQUIRE(g.size() == 6);
    CHECK(g.front() == 1e-4);
    CHECK(g.back() == 10.0);
    CHECK(g[2] == doctest::Approx(1e-2).epsilon(1e-12));
}

TEST_CASE("property: lasso objective never increases across sweeps") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const Dataset ds = oracle::random_dataset(seed, 50, -1.5, 1.5);
        for (double lambda : {1e-4, 1e-2, 0.3}) {
            std::vector<double> trace;
            LassoOptions o;
            o.on_sweep = [&](std::size_t, double obj) { trace.push_back(obj); };
            fit_lasso(ds, 5, lambda, o);
            REQUIRE(trace.size() >= 1);
            for (std::size_t i = 1; i < trace.size(); ++i) CHECK(trace[i] <= trace[i - 1] + 1e-12 * std::abs(trace[i - 1]));
        }
    }
}

TEST_CASE("property: lambda path shrinks the l1 norm") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const Dataset ds = oracle::random_dataset(seed, 50, -1.5, 1.5);
        double prev = std::numeric_limits<double>::infinity();
        for (double lambda : log_grid(1e-4, 10.0, 20)) {
            const auto m = fit_lasso(ds, 5, lambda);
            double l1 = 0.0;
            for (double b : m.standardized_slopes) l1 += std::abs(b);
            CHECK(l1 <= prev + 1e-9);
            prev = l1;
        }
    }
}

TEST_CASE("property: lambda 0 agrees with normal equations") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const Dataset ds = oracle::random_dataset(seed, 40, 0.0, 2.0);
        const auto ref = oracle::poly_least_squares(oracle::column(ds), oracle::responses(ds), 3);
        const auto m = fit_lasso(ds, 3, 0.0);
        for (double x : {0.1, 0.7, 1.3, 1.9}) {
            double r = 0.0;
            for (std::size_t p = 4; p-- > 0;) r = r * x + ref[p];
            CHECK(std::abs(predict_lasso(m, x) - r) <= 1e-6);
        }
    }
}

TEST_CASE("lasso model JSON carries coefficients and config") {
    const auto m = fit_lasso(Dataset::from_xy({0.0, 1.0, 2.0}, {1.0, 3.0, 5.0}), 1, 0.0);
    const json j = m;
    CHECK(j.at("degree") == 1);
    CHECK(j.at("lambda") == 0.0);
    CHECK(j.at("coefficients").size() == 2);
}
