#include "xreg/estimator.hpp"

#include <fstream>
#include <limits>

#include "xreg/detail/parallel.hpp"
#include "xreg/error.hpp"
#include "xreg/numeric.hpp"

namespace xreg {

std::string to_string(ExactMatchPolicy p) {
    return p == ExactMatchPolicy::error ? "error" : "return_mean_of_matches";
}

ExactMatchPolicy exact_match_policy_from_string(const std::string& name) {
    if (name == "return_mean_of_matches" || name == "mean") return ExactMatchPolicy::return_mean_of_matches;
    if (name == "error") return ExactMatchPolicy::error;
    throw ValidationError("unknown exact-match policy \"" + name + "\" (expected mean or error)");
}

namespace {

constexpr std::size_t kNoSkip = std::numeric_limits<std::size_t>::max();

std::string point_text(std::span<const double> x) {
    std::string s = "(";
    for (std::size_t a = 0; a < x.size(); ++a) {
        if (a) s += ",";
        s += format_double(x[a]);
    }
    return s + ")";
}

// Weighted average over all samples except `skip`.
double weighted_average(std::span<const double> x, const Dataset& ds, const KernelEvaluator& kernel,
                        ExactMatchPolicy policy, std::size_t skip) {
    const auto mode = kernel.spec().multidim_mode;
    const bool singular = kernel.spec().singular();

    if (singular) {
        CompensatedSum match_sum;
        std::size_t matches = 0;
        for (std::size_t i = 0; i < ds.size(); ++i) {
            if (i == skip) continue;
            if (combined_sq_distance(mode, x, ds.x(i)) == 0.0) {
                match_sum.add(ds.y(i));
                ++matches;
            }
        }
        if (matches > 0) {
            if (policy == ExactMatchPolicy::error)
                throw SingularityError("query " + point_text(x) + " coincides with a training point under " +
                                       describe(kernel.spec()));
            return match_sum.value() / static_cast<double>(matches);
        }
    }

    CompensatedSum num;
    CompensatedSum den;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        if (i == skip) continue;
        const double w = kernel(combined_sq_distance(mode, x, ds.x(i)));
        num.add(w * ds.y(i));
        den.add(w);
    }
    const double total = den.value();
    if (!(total > 0.0) || !std::isfinite(total))
        throw DegenerateError("degenerate weights at query " + point_text(x) + ": total weight is " +
                              format_double(total));
    return num.value() / total;
}

template <class E>
[[noreturn]] void rethrow_with_index(const E& e, std::size_t index) {
    throw E("grid index " + std::to_string(index) + ": " + e.what());
}

}  // namespace

double predict_at(std::span<const double> x, const Dataset& dataset, const KernelSpec& kernel,
                  ExactMatchPolicy policy) {
    if (x.size() != dataset.dimension())
        throw ValidationError("query has dimension " + std::to_string(x.size()) + ", dataset has " +
                              std::to_string(dataset.dimension()));
    return weighted_average(x, dataset, KernelEvaluator(kernel), policy, kNoSkip);
}

PredictionCurve predict_grid(std::vector<std::vector<double>> grid, const Dataset& dataset,
                             const KernelSpec& kernel, ExactMatchPolicy policy, unsigned threads) {
    const KernelEvaluator eval(kernel);
    PredictionCurve curve{std::move(grid), {}, kernel, policy};
    curve.values.resize(curve.grid.size());
    detail::parallel_for(curve.grid.size(), threads, [&](std::size_t g) {
        const auto& x = curve.grid[g];
        try {
            if (x.size() != dataset.dimension())
                throw ValidationError("query has dimension " + std::to_string(x.size()) + ", dataset has " +
                                      std::to_string(dataset.dimension()));
            curve.values[g] = weighted_average(x, dataset, eval, policy, kNoSkip);
        } catch (const SingularityError& e) {
            rethrow_with_index(e, g);
        } catch (const DegenerateError& e) {
            rethrow_with_index(e, g);
        } catch (const ValidationError& e) {
            rethrow_with_index(e, g);
        }
    });
    return curve;
}

std::vector<double> predict_loo(const Dataset& dataset, const KernelSpec& kernel, ExactMatchPolicy policy,
                                unsigned threads) {
    if (dataset.size() < 2) throw ValidationError("leave-one-out prediction needs at least 2 samples");
    const KernelEvaluator eval(kernel);
    std::vector<double> e(dataset.size());
    detail::parallel_for(dataset.size(), threads, [&](std::size_t i) {
        e[i] = weighted_average(dataset.x(i), dataset, eval, policy, i);
    });
    return e;
}

std::vector<std::vector<double>> product_grid(const std::vector<std::vector<double>>& axes) {
    std::vector<std::vector<double>> grid;
    if (axes.empty()) return grid;
    std::size_t total = 1;
    for (const auto& ax : axes) total *= ax.size();
    grid.reserve(total);
    std::vector<std::size_t> idx(axes.size(), 0);
    for (std::size_t k = 0; k < total; ++k) {
        std::vector<double> point(axes.size());
        for (std::size_t a = 0; a < axes.size(); ++a) point[a] = axes[a][idx[a]];
        grid.push_back(std::move(point));
        for (std::size_t a = axes.size(); a-- > 0;) {
            if (++idx[a] < axes[a].size()) break;
            idx[a] = 0;
        }
    }
    return grid;
}

std::string curve_to_csv(const PredictionCurve& curve) {
    const std::size_t b = curve.grid.empty() ? 1 : curve.grid.front().size();
    std::string out;
    for (std::size_t a = 0; a < b; ++a) out += "d" + std::to_string(a + 1) + ",";
    out += "z\n";
    for (std::size_t g = 0; g < curve.grid.size(); ++g) {
        for (double v : curve.grid[g]) out += format_double(v) + ",";
        out += format_double(curve.values[g]) + "\n";
    }
    return out;
}

void write_curve_csv(const PredictionCurve& curve, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write curve CSV " + path.string());
    out << curve_to_csv(curve);
}

}  // namespace xreg
