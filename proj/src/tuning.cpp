#include "xreg/tuning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "xreg/distance_solver.hpp"
#include "xreg/error.hpp"
#include "xreg/estimator.hpp"
#include "xreg/numeric.hpp"

namespace xreg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kZeroGuard = 1e-9;
constexpr std::size_t kGridPoints = 32;
constexpr double kGolden = 0.6180339887498949;

// r is searched through t = log(ln r), which spreads the grid evenly over
// bandwidth scales from nearly flat weights to near interpolation.
double r_from_t(double t) { return std::exp(std::exp(t)); }
double t_from_r(double r) { return std::log(std::log(r)); }

void check_bounds(const RBounds& b) {
    if (!(b.lo > 1.0) || !(b.hi > b.lo) || !std::isfinite(b.hi))
        throw ValidationError("r bounds must satisfy 1 < lo < hi < inf");
}

KernelSpec with_base(const KernelSpec& family, double r) {
    KernelSpec k = family;
    k.base = r;
    return k;
}

struct LooEval {
    bool degenerate = true;
    double var_e = 0.0;
    std::vector<double> e;
    std::string reason;
};

LooEval loo_eval(const Dataset& ds, const KernelSpec& kernel, unsigned threads) {
    LooEval out;
    try {
        out.e = predict_loo(ds, kernel, ExactMatchPolicy::return_mean_of_matches, threads);
    } catch (const DegenerateError& err) {
        out.reason = err.what();
        return out;
    }
    out.var_e = population_variance(out.e);
    if (!(out.var_e > 0.0)) {
        out.reason = "leave-one-out predictions have zero variance under " + describe(kernel);
        return out;
    }
    out.degenerate = false;
    return out;
}

double safe_randomness(std::span<const double> e, std::span<const double> y) {
    try {
        return randomness_index(e, y).value;
    } catch (const DegenerateError&) {
        return 0.0;
    }
}

}  // namespace

RandomnessIndex randomness_index(std::span<const double> e, std::span<const double> y) {
    if (e.size() != y.size()) throw ValidationError("randomness_index: length mismatch");
    CompensatedSum total;
    RandomnessIndex out;
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (std::abs(y[i]) < kZeroGuard) {
            ++out.excluded;
            continue;
        }
        total.add(std::abs(e[i] / y[i] - 1.0));
    }
    const std::size_t included = y.size() - out.excluded;
    if (included == 0) throw DegenerateError("responses too close to zero for relative index");
    out.value = total.value() / static_cast<double>(included);
    return out;
}

VarianceMatch evaluate_variance_match(double r, const Dataset& dataset, const KernelSpec& family,
                                      unsigned threads) {
    if (dataset.size() < 3) throw ValidationError("variance matching needs at least 3 samples");
    const KernelSpec kernel = with_base(family, r);
    if (!kernel.uses_base()) throw ValidationError("variance matching needs an exp_base family kernel");
    kernel.validate();

    VarianceMatch vm;
    const double var_y = population_variance(dataset.responses());
    const LooEval loo = loo_eval(dataset, kernel, threads);
    if (loo.degenerate) {
        vm.loss = kInf;
        vm.degenerate = true;
        vm.reason = loo.reason;
        return vm;
    }
    vm.variance_ratio = loo.var_e / var_y;
    const double d = var_y / loo.var_e - 1.0;
    vm.loss = d * d;
    return vm;
}

double variance_match_loss(double r, const Dataset& dataset, const KernelSpec& family, unsigned threads) {
    return evaluate_variance_match(r, dataset, family, threads).loss;
}

TuningResult tune_r(const Dataset& dataset, const KernelSpec& family, RBounds bounds, double explained_fraction,
                    unsigned threads) {
    check_bounds(bounds);
    if (!(explained_fraction > 0.0 && explained_fraction <= 1.0))
        throw ValidationError("explained_fraction must lie in (0, 1]");
    if (dataset.size() < 3) throw ValidationError("tuning needs at least 3 samples");
    if (!family.uses_base()) throw ValidationError("tune_r needs an exp_base family kernel");

    const double var_y = population_variance(dataset.responses());
    const double target = explained_fraction * var_y;

    struct Point {
        double t;
        double loss;
    };
    std::vector<Point> evaluated;
    const auto r_at = [&](double t) { return std::clamp(r_from_t(t), bounds.lo, bounds.hi); };
    std::string last_reason = "responses have zero variance";
    auto objective = [&](double t) {
        double loss = kInf;
        if (var_y > 0.0) {
            const LooEval loo = loo_eval(dataset, with_base(family, r_at(t)), threads);
            if (!loo.degenerate) {
                const double d = loo.var_e / target - 1.0;
                loss = d * d;
            } else {
                last_reason = loo.reason;
            }
        }
        evaluated.push_back({t, loss});
        return loss;
    };

    const auto ts = linspace(t_from_r(bounds.lo), t_from_r(bounds.hi), kGridPoints);
    std::size_t best = 0;
    double best_loss = kInf;
    for (std::size_t k = 0; k < ts.size(); ++k) {
        const double loss = objective(ts[k]);
        if (loss < best_loss) {
            best_loss = loss;
            best = k;
        }
    }
    if (!std::isfinite(best_loss))
        throw DegenerateError("variance matching is degenerate for every r in the search grid: " + last_reason);

    // Golden-section search on the bracket around the best grid point.
    double a = ts[best == 0 ? 0 : best - 1];
    double b = ts[std::min(best + 1, ts.size() - 1)];
    const double width_limit = std::log1p(1e-4);  // r_hi / r_lo - 1 <= 1e-4
    double c = b - kGolden * (b - a);
    double d = a + kGolden * (b - a);
    double fc = objective(c);
    double fd = objective(d);
    while (std::exp(b) - std::exp(a) > width_limit) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - kGolden * (b - a);
            fc = objective(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + kGolden * (b - a);
            fd = objective(d);
        }
    }

    // Lowest loss wins; equal losses go to the smaller r.
    const Point chosen = *std::min_element(evaluated.begin(), evaluated.end(), [](const Point& p, const Point& q) {
        return p.loss < q.loss || (p.loss == q.loss && p.t < q.t);
    });

    TuningResult res;
    res.kernel = with_base(family, r_at(chosen.t));
    const LooEval loo = loo_eval(dataset, res.kernel, threads);
    res.variance_ratio = loo.degenerate ? 0.0 : loo.var_e / var_y;
    res.randomness_index = loo.degenerate ? 0.0 : safe_randomness(loo.e, dataset.responses());
    res.explained_fraction = explained_fraction;
    res.objective = chosen.loss;
    res.rounds.push_back({0, res.kernel.base, res.kernel.shift, explained_fraction, res.randomness_index, 0.0});
    res.converged = true;
    return res;
}

NoiseShare noise_share(std::span<const double> e, std::span<const double> y) {
    if (e.size() != y.size()) throw ValidationError("noise_share: length mismatch");
    NoiseShare out;
    CompensatedSum ey;
    CompensatedSum ee;
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (std::abs(e[i]) < kZeroGuard) {
            ++out.excluded;
            continue;
        }
        ey.add(e[i] * y[i]);
        ee.add(e[i] * e[i]);
    }
    const std::size_t used = e.size() - out.excluded;
    if (used == 0) throw DegenerateError("predictions too close to zero for residual ratios");
    const double var_y = population_variance(y);
    if (!(var_y > 0.0)) throw DegenerateError("responses have zero variance");

    // e^2-weighted variance of rho = y / e around its weighted mean c, times
    // mean(e^2); algebraically mean((y - c e)^2).
    const double c = ey.value() / ee.value();
    CompensatedSum spread;
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (std::abs(e[i]) < kZeroGuard) continue;
        const double d = y[i] - c * e[i];
        spread.add(d * d);
    }
    out.raw = spread.value() / static_cast<double>(used) / var_y;
    out.share = std::clamp(out.raw, 0.0, 0.95);
    return out;
}

TuningResult iterate_randomness(const Dataset& dataset, const KernelSpec& family, std::size_t max_rounds,
                                double damping, RBounds bounds, unsigned threads) {
    if (max_rounds < 1) throw ValidationError("max_rounds must be >= 1");
    if (!(damping > 0.0 && damping <= 1.0)) throw ValidationError("damping must lie in (0, 1]");

    double ef = 1.0;
    TuningResult res;
    std::vector<TuningRound> trace;
    for (std::size_t round = 0; round < max_rounds; ++round) {
        res = tune_r(dataset, family, bounds, ef, threads);
        const auto e = predict_loo(dataset, res.kernel, ExactMatchPolicy::return_mean_of_matches, threads);
        const NoiseShare s = noise_share(e, dataset.responses());
        trace.push_back({round, res.kernel.base, res.kernel.shift, ef, res.randomness_index, s.share});

        const double next = (1.0 - damping) * ef + damping * (1.0 - s.share);
        const bool settled = std::abs(next - ef) <= 1e-3;
        res.explained_fraction = ef;
        if (settled) {
            res.converged = true;
            break;
        }
        ef = next;
    }
    res.rounds = std::move(trace);
    return res;
}

double two_param_objective(const Dataset& dataset, double r, double q, double lambda_var, double lambda_fit,
                           MultidimMode mode, unsigned threads) {
    const KernelSpec kernel = KernelSpec::exp_base_shifted(r, q, mode);
    kernel.validate();
    const double var_y = population_variance(dataset.responses());
    if (!(var_y > 0.0)) return kInf;
    const LooEval loo = loo_eval(dataset, kernel, threads);
    if (loo.degenerate) return kInf;
    const double d = var_y / loo.var_e - 1.0;
    CompensatedSum sse;
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        const double res = loo.e[i] - dataset.y(i);
        sse.add(res * res);
    }
    const double fit = sse.value() / var_y / static_cast<double>(dataset.size());
    return lambda_var * d * d + lambda_fit * fit;
}

TuningResult tune_two_param(const Dataset& dataset, const TwoParamOptions& options, MultidimMode mode) {
    check_bounds(options.r_bounds);
    if (!(options.q_lo >= 0.0) || !(options.q_hi >= options.q_lo) || !std::isfinite(options.q_hi))
        throw ValidationError("q bounds must satisfy 0 <= q_lo <= q_hi < inf");
    if (!(options.lambda_fit > 0.0) || !(options.lambda_var > options.lambda_fit))
        throw ValidationError("two-parameter weights must satisfy lambda_var > lambda_fit > 0");
    if (dataset.size() < 3) throw ValidationError("tuning needs at least 3 samples");

    const double u_lo = t_from_r(options.r_bounds.lo);
    const double u_hi = t_from_r(options.r_bounds.hi);
    const double v_lo = std::log1p(options.q_lo);
    const double v_hi = std::log1p(options.q_hi);
    const bool q_free = v_hi > v_lo;
    const auto r_at = [&](double u) {
        return std::clamp(r_from_t(u), options.r_bounds.lo, options.r_bounds.hi);
    };

    auto J = [&](double u, double v) {
        u = std::clamp(u, u_lo, u_hi);
        v = std::clamp(v, v_lo, v_hi);
        return two_param_objective(dataset, r_at(u), std::clamp(std::expm1(v), options.q_lo, options.q_hi),
                                   options.lambda_var, options.lambda_fit, mode, options.threads);
    };

    struct Candidate {
        double u, v, j;
    };
    const auto us = linspace(u_lo, u_hi, 16);
    const auto vs = q_free ? linspace(v_lo, v_hi, 16) : std::vector<double>{v_lo};
    std::vector<Candidate> grid;
    for (double u : us)
        for (double v : vs) grid.push_back({u, v, J(u, v)});
    auto better = [](const Candidate& a, const Candidate& b) {
        if (a.j != b.j) return a.j < b.j;
        if (a.u != b.u) return a.u < b.u;
        return a.v < b.v;
    };
    std::stable_sort(grid.begin(), grid.end(), better);
    if (!std::isfinite(grid.front().j))
        throw DegenerateError("two-parameter objective is degenerate at every grid point");

    const double du = us.size() > 1 ? us[1] - us[0] : 1.0;
    const double dv = vs.size() > 1 ? vs[1] - vs[0] : 1.0;

    // Descends one coordinate with the other held fixed; the first step moves
    // roughly one grid spacing.
    auto descend = [&](const std::function<double(double)>& f, double start, double spacing, bool& ok) {
        const double h = 1e-6 * std::max(1.0, std::abs(start));
        const double g0 = (f(start + h) - f(start - h)) / (2.0 * h);
        if (!std::isfinite(g0)) {
            ok = false;
            return start;
        }
        if (g0 == 0.0) return start;
        const SolveResult sr = solve_gradient(f, start, spacing / std::abs(g0), 1e-7, 40);
        ok = ok && sr.converged;
        return sr.z;
    };

    Candidate best{0, 0, kInf};
    bool best_converged = false;
    const std::size_t starts = std::min<std::size_t>(4, grid.size());
    for (std::size_t s = 0; s < starts; ++s) {
        if (!std::isfinite(grid[s].j)) break;
        Candidate cur = grid[s];
        bool converged = false;
        try {
            for (int sweep = 0; sweep < 6; ++sweep) {
                const Candidate prev = cur;
                const double before = cur.j;
                bool ok = true;
                cur.u = std::clamp(descend([&](double u) { return J(u, cur.v); }, cur.u, du, ok), u_lo, u_hi);
                if (q_free)
                    cur.v = std::clamp(descend([&](double v) { return J(cur.u, v); }, cur.v, dv, ok), v_lo, v_hi);
                cur.j = J(cur.u, cur.v);
                if (cur.j > before) {  // clamping can land on a worse point
                    cur = prev;
                    converged = ok;
                    break;
                }
                if (before - cur.j <= 1e-12 * (1.0 + std::abs(cur.j))) {
                    converged = ok;
                    break;
                }
            }
        } catch (const Error&) {
            cur = grid[s];
        }
        if (better(cur, best)) {
            best = cur;
            best_converged = converged;
        }
    }

    TuningResult res;
    res.kernel = KernelSpec::exp_base_shifted(r_at(best.u), std::clamp(std::expm1(best.v), options.q_lo, options.q_hi), mode);
    const LooEval loo = loo_eval(dataset, res.kernel, options.threads);
    const double var_y = population_variance(dataset.responses());
    res.variance_ratio = loo.degenerate ? 0.0 : loo.var_e / var_y;
    res.randomness_index = loo.degenerate ? 0.0 : safe_randomness(loo.e, dataset.responses());
    res.explained_fraction = 1.0;
    res.objective = best.j;
    res.rounds.push_back({0, res.kernel.base, res.kernel.shift, 1.0, res.randomness_index, 0.0});
    res.converged = best_converged;
    return res;
}

}  // namespace xreg
