#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace xreg {

struct Sample {
    std::vector<double> predictors;
    double response = 0.0;
};

/// Immutable collection of (predictor vector, response) samples sharing one
/// dimension. Predictors are stored row-major in a single buffer.
class Dataset {
public:
    /// Throws ValidationError unless n >= 1, every value is finite and the
    /// predictor buffer holds exactly n * dimension values.
    Dataset(std::size_t dimension, std::vector<double> predictors, std::vector<double> responses,
            std::vector<std::string> predictor_names = {}, std::string response_name = "y");

    static Dataset from_samples(const std::vector<Sample>& samples,
                                std::vector<std::string> predictor_names = {},
                                std::string response_name = "y");

    // Convenience for b = 1.
    static Dataset from_xy(std::vector<double> x, std::vector<double> y);

    std::size_t dimension() const noexcept { return dimension_; }
    std::size_t size() const noexcept { return responses_.size(); }

    std::span<const double> x(std::size_t i) const noexcept {
        return {predictors_.data() + i * dimension_, dimension_};
    }
    double y(std::size_t i) const noexcept { return responses_[i]; }

    std::span<const double> predictors() const noexcept { return predictors_; }
    std::span<const double> responses() const noexcept { return responses_; }

    Sample sample(std::size_t i) const;

    const std::vector<std::string>& predictor_names() const noexcept { return predictor_names_; }
    const std::string& response_name() const noexcept { return response_name_; }

    // Samples at the given indices, in the given order.
    Dataset subset(std::span<const std::size_t> indices) const;
    Dataset with_responses(std::vector<double> responses) const;

    // Smallest and largest value of predictor column `a`.
    std::pair<double, double> predictor_range(std::size_t a) const;

    friend bool operator==(const Dataset&, const Dataset&) = default;

private:
    std::size_t dimension_;
    std::vector<double> predictors_;
    std::vector<double> responses_;
    std::vector<std::string> predictor_names_;
    std::string response_name_;
};

// Column names used when none are given: "x" for one predictor, d1..db otherwise.
std::vector<std::string> default_predictor_names(std::size_t dimension);

// ---------------------------------------------------------------------------
// CSV

/// Reads a header-first, comma separated file. `response_column` names the
/// response; every other column is a predictor, in file order.
Dataset load_csv(const std::filesystem::path& path, const std::string& response_column);
Dataset parse_csv(std::string_view text, const std::string& response_column);

/// Predictors first, response last; numbers in shortest round-trip form.
std::string to_csv(const Dataset& dataset);
void write_csv(const Dataset& dataset, const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Synthetic data

enum class TargetFunction { square, sine, linear, polynomial };

struct Interval {
    double lo = 0.0;
    double hi = 1.0;
    friend bool operator==(const Interval&, const Interval&) = default;
};

/// Deterministic synthetic data: x ~ U(domain) per dimension, response
/// f(x) * M with M ~ U[noise_low, noise_high].
///
/// For b > 1 the target is the sum of the one-dimensional target over the
/// coordinates. `coefficients` are ascending-power polynomial coefficients;
/// used by `polynomial` and by `linear` (defaults to f(x) = x when empty).
struct SynthSpec {
    TargetFunction target_function = TargetFunction::sine;
    std::vector<double> coefficients;
    std::size_t n = 100;
    std::vector<Interval> domain{Interval{}};
    double noise_low = 1.0;
    double noise_high = 1.0;
    std::uint64_t seed = 0;

    void validate() const;
    double target(std::span<const double> x) const;

    friend bool operator==(const SynthSpec&, const SynthSpec&) = default;
};

struct SyntheticData {
    Dataset dataset;
    std::vector<double> truth;        // f(x_i) without noise
    std::vector<double> multipliers;  // the drawn M_i
};

/// Draw order: for each sample, one uniform per predictor dimension, then one
/// for the noise multiplier.
SyntheticData gen_synthetic_detailed(const SynthSpec& spec);
Dataset gen_synthetic(const SynthSpec& spec);

std::string to_string(TargetFunction f);
TargetFunction target_function_from_string(const std::string& name);

// ---------------------------------------------------------------------------
// Normalization

enum class NormalizeMode { none, zscore, minmax };

std::string to_string(NormalizeMode m);
NormalizeMode normalize_mode_from_string(const std::string& name);

// value' = (value - offset) / scale
struct ColumnTransform {
    std::size_t column = 0;  // predictor index, or dimension() for the response
    std::string name;
    double offset = 0.0;
    double scale = 1.0;
};

struct Normalization {
    NormalizeMode mode = NormalizeMode::none;
    std::vector<ColumnTransform> columns;
};

/// Transforms the selected columns (all columns when `columns` is empty).
/// Column index dimension() selects the response.
std::pair<Dataset, Normalization> normalize(const Dataset& dataset, NormalizeMode mode,
                                            std::span<const std::size_t> columns = {});
Dataset denormalize(const Dataset& dataset, const Normalization& normalization);

}  // namespace xreg
