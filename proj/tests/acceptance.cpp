// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "xreg/bench.hpp"
#include "xreg/distance_solver.hpp"
#include "xreg/estimator.hpp"
#include "xreg/kernels.hpp"
#include "xreg/lasso.hpp"
#include "xreg/random.hpp"
#include "xreg/tuning.hpp"

using namespace xreg;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

int failures = 0;

void run(int id, const char* name, double limit_seconds, const std::function<Outcome()>& body) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
        out = body();
    } catch (const std::exception& e) {
        out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < limit_seconds;
    const bool pass = out.pass && in_time;
    if (!pass) ++failures;
    std::printf("%s  %d. %-32s %7.2fs (limit %gs)  %s%s\n", pass ? "PASS" : "FAIL", id, name, secs, limit_seconds,
                out.detail.c_str(), in_time ? "" : " [over time limit]");
    std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

BenchConfig suite(TargetFunction f, double lo, double hi, std::uint64_t seed) {
    BenchConfig c;
    c.data.synthetic = SynthSpec{f, {}, 500, {{lo, hi}}, 0.5, 1.5, seed};
    c.xaxis.kernel = KernelSpec::exp_base(2.0);
    c.xaxis.tuning = TuningMode::iterate;
    c.lasso.degree = 5;
    return c;
}

constexpr std::uint64_t kSeeds[] = {1, 2, 3, 4, 5};

Outcome table_arithmetic() {
    struct Row {
        double lasso, xaxis, expected;
    };
    const Row rows[] = {{0.16057744, 0.15342135612367921, 4.66433},
                        {0.15614923, 0.1474352255852411, 5.91039},
                        {0.15644323, 0.1497225507429759, 4.48875}};
    Outcome out;
    double worst = 0.0;
    for (const Row& r : rows) worst = std::max(worst, std::abs(percent_advantage(r.lasso, r.xaxis) - r.expected));
    out.pass = worst <= 1e-4;
    out.detail = fmt("max |diff| = %.3g", worst);
    return out;
}

Outcome closed_form_vs_descent() {
    const KernelSpec kernels[] = {KernelSpec::exp_base(2.0), KernelSpec::exp_base(1.3),
                                  KernelSpec::inverse_power_shifted(2.0, 0.1), KernelSpec::exp_base_shifted(3.0, 0.5),
                                  KernelSpec::inverse_power(2.0)};
    double worst = 0.0;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        SplitMix64 rng(seed * 7919);
        const std::size_t n = 2 + rng.below(19);
        const Dataset ds = oracle::random_dataset(seed, n);
        const KernelSpec& k = kernels[seed % 5];
        const double x[] = {rng.uniform(-3.0, 3.0)};
        std::vector<double> w(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double d[] = {x[0] - ds.x(i)[0]};
            w[i] = weight(k, d);
        }
        const auto cost = [&](double z) {
            double c = 0.0;
            for (std::size_t i = 0; i < n; ++i) c += w[i] * (z - ds.y(i)) * (z - ds.y(i));
            return c;
        };
        double wsum = 0.0;
        for (double v : w) wsum += v;
        // The gradient 2 * sum(w) * (z - Z) must fall below 2e-8 * sum(w).
        const SolveResult sr = solve_gradient(cost, 0.0, 0.25 / wsum, 2e-8 * wsum, 100000);
        worst = std::max(worst, std::abs(sr.z - predict_at(x, ds, k)));
    }
    Outcome out;
    out.pass = worst <= 1e-6;
    out.detail = fmt("max |closed form - descent| = %.3g", worst);
    return out;
}

Outcome fixed_point_vs_grid() {
    double worst = 0.0;
    double worst_stat = 0.0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        SplitMix64 rng(seed * 104729);
        const std::size_t n = 1 + rng.below(10);
        const Dataset ds = oracle::random_dataset(seed + 1000, n);
        const auto [xlo, xhi] = ds.predictor_range(0);
        const double x[] = {0.5 * (xlo + xhi)};
        const auto [lo, hi] = std::minmax_element(ds.responses().begin(), ds.responses().end());
        const double grid = oracle::grid_argmin([&](double z) { return euclid_cost(x, z, ds); }, *lo, *hi, 1e-4);
        const SolveResult sr = solve_fixed_point(x, ds);
        if (!sr.converged) return {false, "fixed point did not converge for seed " + std::to_string(seed)};
        worst = std::max(worst, std::abs(sr.z - grid));
        const Stationarity st = stationarity(x, sr.z, ds);
        worst_stat = std::max(worst_stat, std::abs(st.gradient) / st.inverse_distances);
    }
    Outcome out;
    out.pass = worst <= 2e-4 && worst_stat <= 1e-6;
    out.detail = fmt("max |z - grid| = %.3g", worst) + fmt(", max residual/sum(1/d) = %.3g", worst_stat);
    return out;
}

Outcome compare_suites(TargetFunction f, double lo, double hi, double factor, bool strict) {
    Outcome out;
    for (std::uint64_t seed : kSeeds) {
        const BenchmarkReport r = run_benchmark(suite(f, lo, hi, seed));
        const double xa = r.method("xaxis")->metrics.mae;
        const double la = r.method("lasso")->metrics.mae;
        // Re-score the stored predictions independently of the report fields.
        std::vector<double> px;
        std::vector<double> pl;
        std::vector<double> t;
        for (std::size_t i = 0; i < r.targets.size(); ++i) {
            if (!r.interior[i]) continue;
            px.push_back(r.method("xaxis")->predictions[i]);
            pl.push_back(r.method("lasso")->predictions[i]);
            t.push_back(r.targets[i]);
        }
        double sx = 0.0;
        double sl = 0.0;
        for (std::size_t i = 0; i < t.size(); ++i) {
            sx += std::abs(px[i] - t[i]);
            sl += std::abs(pl[i] - t[i]);
        }
        sx /= static_cast<double>(t.size());
        sl /= static_cast<double>(t.size());
        if (std::abs(sx - xa) > 1e-12 || std::abs(sl - la) > 1e-12) out.pass = false;
        const bool ok = strict ? xa < factor * la : xa <= factor * la;
        out.pass = out.pass && ok;
        char buf[96];
        std::snprintf(buf, sizeof buf, "%sseed %llu: x-axis %.4f lasso %.4f", out.detail.empty() ? "" : "; ",
                      static_cast<unsigned long long>(seed), xa, la);
        out.detail += buf;
    }
    return out;
}

Outcome variance_matching() {
    const SynthSpec s{TargetFunction::sine, {}, 200, {{0.0, 4.0 * std::numbers::pi}}, 1.0, 1.0, 6};
    const Dataset ds = gen_synthetic(s);
    const TuningResult res = tune_r(ds, KernelSpec::exp_base(2.0), {}, 1.0);
    const auto e = oracle::exp_kernel_loo(oracle::column(ds), oracle::responses(ds), res.kernel.base);
    const double ratio = oracle::variance(e) / oracle::variance(oracle::responses(ds));
    Outcome out;
    out.pass = std::abs(ratio - 1.0) <= 0.1;
    out.detail = fmt("r = %.6g", res.kernel.base) + fmt(", Var(e)/Var(Y) = %.6f", ratio);
    return out;
}

Outcome noise_recovery() {
    const SynthSpec s{TargetFunction::square, {}, 2000, {{1.0, 2.0}}, 0.5, 1.5, 2024};
    const SyntheticData d = gen_synthetic_detailed(s);
    std::vector<double> f2;
    for (double f : d.truth) f2.push_back(f * f);
    double mean_f2 = 0.0;
    for (double v : f2) mean_f2 += v;
    mean_f2 /= static_cast<double>(f2.size());
    const double sigma = oracle::variance(d.multipliers) * mean_f2 / oracle::variance(oracle::responses(d.dataset));

    const TuningResult res = iterate_randomness(d.dataset, KernelSpec::exp_base(2.0));
    const double implied = 1.0 - res.explained_fraction;
    Outcome out;
    out.pass = implied >= 0.4 * sigma && implied <= 2.5 * sigma;
    out.detail = fmt("1 - EF = %.4f", implied) + fmt(", oracle share = %.4f", sigma) +
                 fmt(", band [%.4f, ", 0.4 * sigma) + fmt("%.4f]", 2.5 * sigma) +
                 fmt(", rounds %g", static_cast<double>(res.rounds.size()));
    return out;
}

Outcome invariant_suites() {
    std::vector<std::string> broken;
    auto expect = [&](bool ok, const std::string& what) {
        if (!ok && std::find(broken.begin(), broken.end(), what) == broken.end()) broken.push_back(what);
    };

    // Kernels: symmetry, positivity, monotonicity.
    const KernelSpec specs[] = {KernelSpec::exp_base(1.2),          KernelSpec::exp_base(2000.0),
                                KernelSpec::exp_base_shifted(3.0, 0.5), KernelSpec::inverse_power(2.0),
                                KernelSpec::inverse_power_shifted(3.0, 0.01), KernelSpec::uniform()};
    SplitMix64 rng(31337);
    for (const auto& k : specs) {
        for (int t = 0; t < 500; ++t) {
            const double a = rng.uniform(0.001, 1.5);
            const double b = rng.uniform(0.001, 1.5);
            const double da[] = {a};
            const double na[] = {-a};
            const double db[] = {b};
            const double wa = weight(k, da);
            const double wb = weight(k, db);
            expect(wa == weight(k, na), "kernel symmetry");
            expect(wa > 0.0 && std::isfinite(wa), "kernel positivity");
            if (a < b) expect(k.family == KernelFamily::uniform ? wa >= wb : wa > wb, "kernel monotonicity");
        }
    }

    // Estimator: convex hull, shift and scale equivariance, r -> 1 limit.
    const KernelSpec est[] = {KernelSpec::exp_base(1.5), KernelSpec::exp_base(40.0),
                              KernelSpec::inverse_power_shifted(2.0, 0.2), KernelSpec::inverse_power(2.0)};
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        const Dataset ds = oracle::random_dataset(seed, 3 + seed % 25);
        const auto [lo, hi] = std::minmax_element(ds.responses().begin(), ds.responses().end());
        const double c = rng.uniform(-20.0, 20.0);
        const double s = rng.uniform(-8.0, 8.0);
        std::vector<double> ys;
        std::vector<double> ym;
        double mean = 0.0;
        for (double y : ds.responses()) {
            ys.push_back(y + c);
            ym.push_back(s * y);
            mean += y;
        }
        mean /= static_cast<double>(ds.size());
        const Dataset shifted = ds.with_responses(ys);
        const Dataset scaled = ds.with_responses(ym);
        for (const auto& k : est) {
            for (int t = 0; t < 8; ++t) {
                const double x[] = {rng.uniform(-3.5, 3.5)};
                const double z = predict_at(x, ds, k);
                expect(z >= *lo && z <= *hi, "convex hull bound");
                expect(std::abs(predict_at(x, shifted, k) - (z + c)) < 1e-12 * std::max(1.0, std::abs(z + c)),
                       "shift equivariance");
                expect(std::abs(predict_at(x, scaled, k) - s * z) < 1e-12 * std::max(1.0, std::abs(s * z)),
                       "scale equivariance");
            }
        }
        const double x[] = {rng.uniform(-3.0, 3.0)};
        expect(std::abs(predict_at(x, ds, KernelSpec::exp_base(1.0 + 1e-9)) - mean) <= 1e-6 * std::abs(mean),
               "r -> 1 global mean");
    }

    // Fixed point: monotone cost along iterates.
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        const Dataset ds = oracle::random_dataset(seed + 500, 2 + seed % 15);
        const double x[] = {rng.uniform(-3.0, 3.0)};
        double z = 0.0;
        for (double y : ds.responses()) z += y;
        z /= static_cast<double>(ds.size());
        for (int t = 0; t < 300; ++t) {
            const double next = fixed_point_update(x, z, ds);
            expect(euclid_cost(x, next, ds) <= euclid_cost(x, z, ds) + 1e-12, "monotone fixed-point cost");
            z = next;
        }
    }

    // Lasso: lambda path shrinks the l1 norm; lambda 0 matches least squares.
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        const Dataset ds = oracle::random_dataset(seed + 900, 60, 0.0, 2.0);
        double prev = std::numeric_limits<double>::infinity();
        for (double lambda : log_grid(1e-4, 10.0, 20)) {
            const LassoModel m = fit_lasso(ds, 5, lambda);
            double l1 = 0.0;
            for (double b : m.standardized_slopes) l1 += std::abs(b);
            expect(l1 <= prev + 1e-9, "lasso lambda path");
            prev = l1;
        }
        const auto ref = oracle::poly_least_squares(oracle::column(ds), oracle::responses(ds), 3);
        const LassoModel m = fit_lasso(ds, 3, 0.0);
        for (double x : {0.05, 0.6, 1.2, 1.95}) {
            double r = 0.0;
            for (std::size_t p = 4; p-- > 0;) r = r * x + ref[p];
            expect(std::abs(predict_lasso(m, x) - r) <= 1e-6, "lasso lambda 0 vs normal equations");
        }
    }

    // Reports: stored metrics recompute from stored predictions.
    BenchConfig c;
    c.data.synthetic = SynthSpec{TargetFunction::sine, {}, 150, {{0.0, 6.0}}, 0.5, 1.5, 77};
    c.xaxis.max_rounds = 5;
    expect(consistency_error(run_benchmark(c)) <= 1e-12, "report self-consistency");

    Outcome out;
    out.pass = broken.empty();
    if (broken.empty()) {
        out.detail = "all invariant families hold";
    } else {
        out.detail = "broken:";
        for (const auto& b : broken) out.detail += " [" + b + "]";
    }
    return out;
}

}  // namespace

int main() {
    const double pi = std::numbers::pi;
    run(1, "table arithmetic", 1.0, table_arithmetic);
    run(2, "closed form vs descent", 10.0, closed_form_vs_descent);
    run(3, "fixed point vs grid", 10.0, fixed_point_vs_grid);
    run(4, "sine superiority", 60.0, [&] { return compare_suites(TargetFunction::sine, 0.0, 4.0 * pi, 1.0, true); });
    run(5, "quadratic competitiveness", 60.0,
        [] { return compare_suites(TargetFunction::square, 0.0, 3.0, 1.5, false); });
    run(6, "variance matching", 20.0, variance_matching);
    run(7, "noise recovery", 60.0, noise_recovery);
    run(8, "invariant suites", 30.0, invariant_suites);
    std::printf("%d of 8 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
