#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "xreg/error.hpp"
#include "xreg/estimator.hpp"
#include "xreg/tuning.hpp"

using namespace xreg;

namespace {

Dataset sine_data(std::size_t n, double noise_lo, double noise_hi, std::uint64_t seed) {
    SynthSpec s{TargetFunction::sine, {}, n, {{0.0, 4.0 * std::numbers::pi}}, noise_lo, noise_hi, seed};
    return gen_synthetic(s);
}

double oracle_loss(const Dataset& ds, double r) {
    const auto e = oracle::exp_kernel_loo(oracle::column(ds), oracle::responses(ds), r);
    const double vy = oracle::variance(oracle::responses(ds));
    const double ve = oracle::variance(e);
    return (vy / ve - 1.0) * (vy / ve - 1.0);
}

}  // namespace

TEST_CASE("randomness_index examples") {
    const std::vector<double> y{1.0, -2.0, 4.0};
    CHECK(randomness_index(y, y).value == 0.0);
    std::vector<double> e;
    for (double v : y) e.push_back(1.1 * v);
    CHECK(randomness_index(e, y).value == doctest::Approx(0.1).epsilon(1e-14));

    const auto r = randomness_index(std::vector<double>{1.5, 2.0, 9.0, 4.0}, std::vector<double>{1.0, 2.0, 0.0, 4.0});
    CHECK(r.value == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
    CHECK(r.excluded == 1);

    try {
        randomness_index(std::vector<double>{1.0}, std::vector<double>{0.0});
        FAIL("expected DegenerateError");
    } catch (const DegenerateError& ex) {
        CHECK(std::string(ex.what()).find("responses too close to zero for relative index") != std::string::npos);
    }
}

TEST_CASE("property: randomness_index is scale invariant") {
    SplitMix64 rng(8);
    for (int t = 0; t < 50; ++t) {
        std::vector<double> e(20);
        std::vector<double> y(20);
        for (std::size_t i = 0; i < 20; ++i) {
            y[i] = rng.uniform(-3.0, 3.0);
            e[i] = y[i] * rng.uniform(0.5, 1.5);
        }
        const double c = std::ldexp(1.0, static_cast<int>(rng.below(20)) - 10) * (rng.below(2) ? 1 : -1);
        std::vector<double> ce;
        std::vector<double> cy;
        for (std::size_t i = 0; i < 20; ++i) {
            ce.push_back(c * e[i]);
            cy.push_back(c * y[i]);
        }
        CHECK(randomness_index(ce, cy).value == randomness_index(e, y).value);
    }
}

TEST_CASE("variance_match_loss") {
    SUBCASE("matches a straightforward re-implementation") {
        const Dataset ds = sine_data(30, 0.5, 1.5, 30);
        const double loss = variance_match_loss(2.0, ds, KernelSpec::exp_base(2.0));
        const double ref = oracle_loss(ds, 2.0);
        CHECK(std::abs(loss - ref) <= 1e-12 * std::max(1.0, ref));
    }
    SUBCASE("constant responses give the infinite sentinel with a reason") {
        const Dataset ds = Dataset::from_xy({0.0, 1.0, 2.0}, {3.0, 3.0, 3.0});
        const auto m = evaluate_variance_match(2.0, ds, KernelSpec::exp_base(2.0));
        CHECK(m.degenerate);
        CHECK(std::isinf(m.loss));
        CHECK_FALSE(m.reason.empty());
        CHECK(std::isinf(variance_match_loss(2.0, ds, KernelSpec::exp_base(2.0))));
    }
    SUBCASE("ratio arithmetic") {
        const double vy = 4.0;
        const double ve = 2.0;
        CHECK((vy / ve - 1.0) * (vy / ve - 1.0) == 1.0);
        // Near-flat weights on three points: e_i is the mean of the other two,
        // so Var(e) = Var(Y) / 4 and the loss is (4 - 1)^2.
        const Dataset ds = Dataset::from_xy({0.0, 1.0, 2.0}, {1.0, 5.0, 3.0});
        const auto m = evaluate_variance_match(1.0 + 1e-12, ds, KernelSpec::exp_base(2.0));
        CHECK(m.variance_ratio == doctest::Approx(0.25).epsilon(1e-9));
        CHECK(m.loss == doctest::Approx(9.0).epsilon(1e-9));
    }
}

TEST_CASE("tune_r") {
    SUBCASE("constant function is degenerate") {
        const Dataset ds = Dataset::from_xy({0.0, 0.5, 1.0, 1.5, 2.0}, {2.0, 2.0, 2.0, 2.0, 2.0});
        CHECK_THROWS_AS(tune_r(ds, KernelSpec::exp_base(2.0)), DegenerateError);
    }
    SUBCASE("noiseless sine reaches the variance target") {
        const Dataset ds = sine_data(200, 1.0, 1.0, 4);
        const auto res = tune_r(ds, KernelSpec::exp_base(2.0));
        CHECK(std::abs(res.variance_ratio - 1.0) <= 0.1);
        const double r = res.kernel.base;
        const auto e = oracle::exp_kernel_loo(oracle::column(ds), oracle::responses(ds), r);
        const double ratio = oracle::variance(e) / oracle::variance(oracle::responses(ds));
        CHECK(std::abs(ratio - 1.0) <= 0.1);
        CHECK(std::abs(ratio - res.variance_ratio) <= 1e-9);
    }
    SUBCASE("a lower explained fraction selects a weakly smaller r") {
        const Dataset ds = sine_data(150, 0.5, 1.5, 12);
        const auto full = tune_r(ds, KernelSpec::exp_base(2.0), {}, 1.0);
        const auto half = tune_r(ds, KernelSpec::exp_base(2.0), {}, 0.5);
        CHECK(half.kernel.base <= full.kernel.base);
        CHECK(half.variance_ratio <= full.variance_ratio);
    }
    SUBCASE("result stays inside the bounds") {
        const Dataset ds = sine_data(60, 0.5, 1.5, 2);
        const auto res = tune_r(ds, KernelSpec::exp_base(2.0), {1.5, 3.0});
        CHECK(res.kernel.base >= 1.5);
        CHECK(res.kernel.base <= 3.0);
    }
    SUBCASE("bad bounds are rejected") {
        const Dataset ds = sine_data(20, 0.5, 1.5, 2);
        CHECK_THROWS_AS(tune_r(ds, KernelSpec::exp_base(2.0), {1.0, 3.0}), ValidationError);
        CHECK_THROWS_AS(tune_r(ds, KernelSpec::exp_base(2.0), {3.0, 2.0}), ValidationError);
        CHECK_THROWS_AS(tune_r(ds, KernelSpec::exp_base(2.0), {}, 0.0), ValidationError);
        CHECK_THROWS_AS(tune_r(ds, KernelSpec::inverse_power(2.0)), ValidationError);
    }
}

TEST_CASE("noise_share") {
    const std::vector<double> e{1.0, 2.0, 3.0, 4.0};
    // rho == 1 everywhere: no multiplicative spread.
    CHECK(noise_share(e, e).share == 0.0);
    // A common factor in rho is not noise.
    CHECK(noise_share(e, std::vector<double>{2.0, 4.0, 6.0, 8.0}).share == 0.0);
    // rho = (2, 0, 2, 0) with weights e^2; Var(y) = 6.
    const std::vector<double> y{2.0, 0.0, 6.0, 0.0};
    const double c = (1 * 2 + 3 * 6) / 30.0;
    const double raw = ((2 - c) * (2 - c) + 4 * c * c + (6 - 3 * c) * (6 - 3 * c) + 16 * c * c) / 4.0 / 6.0;
    CHECK(noise_share(e, y).raw == doctest::Approx(raw).epsilon(1e-14));
    const auto ex = noise_share(std::vector<double>{0.0, 1.0, 2.0}, std::vector<double>{5.0, 1.0, 2.0});
    CHECK(ex.excluded == 1);
}

TEST_CASE("iterate_randomness") {
    SUBCASE("noiseless quadratic keeps EF near 1") {
        SynthSpec s{TargetFunction::square, {}, 200, {{0.0, 3.0}}, 1.0, 1.0, 9};
        const Dataset ds = gen_synthetic(s);
        const auto res = iterate_randomness(ds, KernelSpec::exp_base(2.0));
        CHECK(res.converged);
        CHECK(res.rounds.size() <= 3);
        for (const auto& round : res.rounds) {
            CHECK(round.explained_fraction >= 0.97);
            CHECK(round.explained_fraction <= 1.0);
            // Recompute s_t from the round's kernel: e^2-weighted variance of
            // rho = y / e, times mean(e^2), over Var(y).
            const auto e = oracle::exp_kernel_loo(oracle::column(ds), oracle::responses(ds), round.r);
            const auto y = oracle::responses(ds);
            double wsum = 0.0;
            double wrho = 0.0;
            for (std::size_t i = 0; i < e.size(); ++i) {
                wsum += e[i] * e[i];
                wrho += e[i] * e[i] * (y[i] / e[i]);
            }
            const double rho_bar = wrho / wsum;
            double wvar = 0.0;
            for (std::size_t i = 0; i < e.size(); ++i) wvar += e[i] * e[i] * (y[i] / e[i] - rho_bar) * (y[i] / e[i] - rho_bar);
            wvar /= wsum;
            const double e2 = wsum / static_cast<double>(e.size());
            const double s_ref = std::clamp(wvar * e2 / oracle::variance(y), 0.0, 0.95);
            CHECK(std::abs(round.noise_share - s_ref) <= 1e-9);
            CHECK(round.noise_share <= 0.03);
        }
    }
    SUBCASE("smaller damping gives no larger EF steps") {
        const Dataset ds = sine_data(150, 0.5, 1.5, 21);
        const auto fast = iterate_randomness(ds, KernelSpec::exp_base(2.0), 20, 1.0);
        const auto slow = iterate_randomness(ds, KernelSpec::exp_base(2.0), 20, 0.3);
        const auto max_step = [](const TuningResult& r) {
            double m = 0.0;
            double prev = 1.0;
            for (const auto& round : r.rounds) {
                m = std::max(m, std::abs(round.explained_fraction - prev));
                prev = round.explained_fraction;
            }
            return m;
        };
        CHECK(max_step(slow) <= max_step(fast));
        CHECK(slow.rounds.size() <= 20);
    }
    SUBCASE("bad damping is rejected") {
        const Dataset ds = sine_data(20, 0.5, 1.5, 2);
        CHECK_THROWS_AS(iterate_randomness(ds, KernelSpec::exp_base(2.0), 20, 0.0), ValidationError);
        CHECK_THROWS_AS(iterate_randomness(ds, KernelSpec::exp_base(2.0), 0, 0.5), ValidationError);
    }
}

TEST_CASE("tune_two_param") {
    const Dataset ds = sine_data(80, 0.5, 1.5, 5);
    SUBCASE("q pinned at zero reduces to a one-parameter search") {
        TwoParamOptions o;
        o.q_lo = 0.0;
        o.q_hi = 0.0;
        const auto two = tune_two_param(ds, o);
        CHECK(two.kernel.shift == 0.0);
        // Golden-section search of the same weighted objective over ln r.
        const auto j = [&](double log_r) {
            return two_param_objective(ds, std::exp(log_r), 0.0, o.lambda_var, o.lambda_fit);
        };
        const double log_r = oracle::golden_min(j, std::log(1.5), std::log(1e300), 1e-6);
        CHECK(std::abs(two.kernel.base / std::exp(log_r) - 1.0) <= 0.05);
        CHECK(two.objective <= j(log_r) + 1e-12);
    }
    SUBCASE("vanishing fit weight leaves the variance term") {
        TwoParamOptions o;
        o.lambda_fit = 1e-9;
        const auto res = tune_two_param(ds, o);
        const double v = o.lambda_var * variance_match_loss(res.kernel.base, ds, res.kernel);
        CHECK(std::abs(res.objective - v) <= 1e-6 * std::max(std::abs(v), 1e-300) + 1e-9);
    }
    SUBCASE("no worse than every point of a 16 x 16 sweep") {
        TwoParamOptions o;
        const auto res = tune_two_param(ds, o);
        CHECK(res.objective == doctest::Approx(two_param_objective(ds, res.kernel.base, res.kernel.shift,
                                                                   o.lambda_var, o.lambda_fit)));
        // Sweep uniform in log r over [1.01, 1e4] and in q over [0, 100].
        for (int i = 0; i < 16; ++i) {
            const double r = std::exp(std::log(1.01) + (std::log(1e4) - std::log(1.01)) * i / 15.0);
            for (int j = 0; j < 16; ++j) {
                const double q = std::expm1(std::log1p(100.0) * j / 15.0);
                CHECK(res.objective <= two_param_objective(ds, r, q, o.lambda_var, o.lambda_fit) + 1e-12);
            }
        }
    }
}
