#include "xreg/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "xreg/error.hpp"
#include "xreg/numeric.hpp"
#include "xreg/random.hpp"

namespace xreg {

std::vector<std::string> default_predictor_names(std::size_t dimension) {
    if (dimension == 1) return {"x"};
    std::vector<std::string> names;
    names.reserve(dimension);
    for (std::size_t a = 0; a < dimension; ++a) names.push_back("d" + std::to_string(a + 1));
    return names;
}

Dataset::Dataset(std::size_t dimension, std::vector<double> predictors, std::vector<double> responses,
                 std::vector<std::string> predictor_names, std::string response_name)
    : dimension_(dimension),
      predictors_(std::move(predictors)),
      responses_(std::move(responses)),
      predictor_names_(std::move(predictor_names)),
      response_name_(std::move(response_name)) {
    if (dimension_ == 0) throw ValidationError("dataset dimension must be at least 1");
    if (responses_.empty()) throw ValidationError("dataset must contain at least one sample");
    if (predictors_.size() != responses_.size() * dimension_)
        throw ValidationError("predictor buffer size does not match n * dimension");
    for (std::size_t i = 0; i < predictors_.size(); ++i)
        if (!std::isfinite(predictors_[i]))
            throw ValidationError("non-finite predictor in sample " + std::to_string(i / dimension_));
    for (std::size_t i = 0; i < responses_.size(); ++i)
        if (!std::isfinite(responses_[i]))
            throw ValidationError("non-finite response in sample " + std::to_string(i));
    if (predictor_names_.empty()) predictor_names_ = default_predictor_names(dimension_);
    if (predictor_names_.size() != dimension_)
        throw ValidationError("expected " + std::to_string(dimension_) + " predictor names");
}

Dataset Dataset::from_samples(const std::vector<Sample>& samples, std::vector<std::string> predictor_names,
                              std::string response_name) {
    if (samples.empty()) throw ValidationError("dataset must contain at least one sample");
    const std::size_t b = samples.front().predictors.size();
    std::vector<double> x;
    std::vector<double> y;
    x.reserve(samples.size() * b);
    y.reserve(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (samples[i].predictors.size() != b)
            throw ValidationError("sample " + std::to_string(i) + " has dimension " +
                                  std::to_string(samples[i].predictors.size()) + ", expected " +
                                  std::to_string(b));
        x.insert(x.end(), samples[i].predictors.begin(), samples[i].predictors.end());
        y.push_back(samples[i].response);
    }
    return Dataset(b, std::move(x), std::move(y), std::move(predictor_names), std::move(response_name));
}

Dataset Dataset::from_xy(std::vector<double> x, std::vector<double> y) {
    if (x.size() != y.size()) throw ValidationError("x and y lengths differ");
    return Dataset(1, std::move(x), std::move(y));
}

Sample Dataset::sample(std::size_t i) const {
    const auto xi = x(i);
    return Sample{{xi.begin(), xi.end()}, responses_[i]};
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
    std::vector<double> x;
    std::vector<double> y;
    x.reserve(indices.size() * dimension_);
    y.reserve(indices.size());
    for (std::size_t i : indices) {
        if (i >= size()) throw ValidationError("subset index out of range");
        const auto xi = this->x(i);
        x.insert(x.end(), xi.begin(), xi.end());
        y.push_back(responses_[i]);
    }
    return Dataset(dimension_, std::move(x), std::move(y), predictor_names_, response_name_);
}

Dataset Dataset::with_responses(std::vector<double> responses) const {
    return Dataset(dimension_, predictors_, std::move(responses), predictor_names_, response_name_);
}

std::pair<double, double> Dataset::predictor_range(std::size_t a) const {
    double lo = predictors_[a];
    double hi = lo;
    for (std::size_t i = 1; i < size(); ++i) {
        const double v = predictors_[i * dimension_ + a];
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return {lo, hi};
}

// ---------------------------------------------------------------------------
// CSV

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        fields.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                                 : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return fields;
}

}  // namespace

Dataset parse_csv(std::string_view text, const std::string& response_column) {
    if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);

    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t nl = text.find('\n', start);
        const std::string_view line =
            text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
        lines.push_back(line);
        if (nl == std::string_view::npos) break;
        start = nl + 1;
    }
    auto first = std::find_if(lines.begin(), lines.end(), [](auto l) { return !trim(l).empty(); });
    if (first == lines.end()) throw DataError("CSV has no header row");

    const auto header = split_fields(*first);
    std::unordered_set<std::string_view> seen;
    std::size_t response_index = header.size();
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (header[c].empty()) throw DataError("CSV header column " + std::to_string(c + 1) + " is empty");
        if (!seen.insert(header[c]).second)
            throw DataError("duplicate CSV header name \"" + std::string(header[c]) + "\"");
        if (header[c] == response_column) response_index = c;
    }
    if (response_index == header.size())
        throw DataError("response column \"" + response_column + "\" not found in CSV header");
    if (header.size() < 2) throw DataError("CSV needs at least one predictor column besides the response");

    std::vector<std::string> predictor_names;
    for (std::size_t c = 0; c < header.size(); ++c)
        if (c != response_index) predictor_names.emplace_back(header[c]);

    const std::size_t b = header.size() - 1;
    std::vector<double> x;
    std::vector<double> y;
    std::size_t row = 0;
    for (auto it = first + 1; it != lines.end(); ++it) {
        if (trim(*it).empty()) continue;
        ++row;
        const auto fields = split_fields(*it);
        if (fields.size() != header.size())
            throw DataError("row " + std::to_string(row) + ": expected " + std::to_string(header.size()) +
                            " fields, found " + std::to_string(fields.size()));
        for (std::size_t c = 0; c < fields.size(); ++c) {
            double v = 0.0;
            if (!parse_double(fields[c], v))
                throw DataError("row " + std::to_string(row) + ", column \"" + std::string(header[c]) +
                                "\": cannot parse \"" + std::string(fields[c]) + "\" as a finite number");
            if (c == response_index)
                y.push_back(v);
            else
                x.push_back(v);
        }
    }
    if (y.empty()) throw DataError("CSV has a header but no data rows");
    return Dataset(b, std::move(x), std::move(y), std::move(predictor_names), response_column);
}

Dataset load_csv(const std::filesystem::path& path, const std::string& response_column) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open CSV file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_csv(buf.str(), response_column);
    } catch (const DataError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

std::string to_csv(const Dataset& dataset) {
    std::string out;
    for (const auto& name : dataset.predictor_names()) out += name + ",";
    out += dataset.response_name() + "\n";
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        for (double v : dataset.x(i)) {
            out += format_double(v);
            out += ',';
        }
        out += format_double(dataset.y(i));
        out += '\n';
    }
    return out;
}

void write_csv(const Dataset& dataset, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write CSV file " + path.string());
    out << to_csv(dataset);
}

// ---------------------------------------------------------------------------
// Synthetic data

std::string to_string(TargetFunction f) {
    switch (f) {
        case TargetFunction::square: return "square";
        case TargetFunction::sine: return "sine";
        case TargetFunction::linear: return "linear";
        case TargetFunction::polynomial: return "polynomial";
    }
    return "unknown";
}

TargetFunction target_function_from_string(const std::string& name) {
    if (name == "square") return TargetFunction::square;
    if (name == "sine") return TargetFunction::sine;
    if (name == "linear") return TargetFunction::linear;
    if (name == "polynomial") return TargetFunction::polynomial;
    throw ValidationError("unknown target function \"" + name + "\" (expected square, sine, linear, polynomial)");
}

void SynthSpec::validate() const {
    if (n < 1) throw ValidationError("SynthSpec.n must be at least 1");
    if (domain.empty()) throw ValidationError("SynthSpec.domain must have at least one interval");
    for (const auto& d : domain)
        if (!std::isfinite(d.lo) || !std::isfinite(d.hi) || d.lo > d.hi)
            throw ValidationError("SynthSpec.domain interval must be finite with lo <= hi");
    if (!std::isfinite(noise_low) || !std::isfinite(noise_high) || !(noise_low > 0.0))
        throw ValidationError("SynthSpec.noise_low must be finite and > 0");
    if (noise_low > noise_high) throw ValidationError("SynthSpec requires noise_low <= noise_high");
    if (target_function == TargetFunction::polynomial && coefficients.empty())
        throw ValidationError("polynomial target needs coefficients");
    if (target_function == TargetFunction::linear && !coefficients.empty() && coefficients.size() != 2)
        throw ValidationError("linear target takes exactly two coefficients (intercept, slope)");
    for (double c : coefficients)
        if (!std::isfinite(c)) throw ValidationError("SynthSpec.coefficients must be finite");
}

double SynthSpec::target(std::span<const double> x) const {
    auto poly = [this](double v) {
        double acc = 0.0;
        for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) acc = acc * v + *it;
        return acc;
    };
    double total = 0.0;
    for (double v : x) {
        switch (target_function) {
            case TargetFunction::square: total += v * v; break;
            case TargetFunction::sine: total += std::sin(v); break;
            case TargetFunction::linear: total += coefficients.empty() ? v : poly(v); break;
            case TargetFunction::polynomial: total += poly(v); break;
        }
    }
    return total;
}

SyntheticData gen_synthetic_detailed(const SynthSpec& spec) {
    spec.validate();
    const std::size_t b = spec.domain.size();
    SplitMix64 rng(spec.seed);
    std::vector<double> x(spec.n * b);
    std::vector<double> y(spec.n);
    std::vector<double> truth(spec.n);
    std::vector<double> mult(spec.n);
    for (std::size_t i = 0; i < spec.n; ++i) {
        for (std::size_t a = 0; a < b; ++a) x[i * b + a] = rng.uniform(spec.domain[a].lo, spec.domain[a].hi);
        mult[i] = rng.uniform(spec.noise_low, spec.noise_high);
        truth[i] = spec.target({x.data() + i * b, b});
        y[i] = truth[i] * mult[i];
    }
    return SyntheticData{Dataset(b, std::move(x), std::move(y)), std::move(truth), std::move(mult)};
}

Dataset gen_synthetic(const SynthSpec& spec) { return gen_synthetic_detailed(spec).dataset; }

// ---------------------------------------------------------------------------
// Normalization

std::string to_string(NormalizeMode m) {
    switch (m) {
        case NormalizeMode::none: return "none";
        case NormalizeMode::zscore: return "zscore";
        case NormalizeMode::minmax: return "minmax";
    }
    return "unknown";
}

NormalizeMode normalize_mode_from_string(const std::string& name) {
    if (name == "none") return NormalizeMode::none;
    if (name == "zscore") return NormalizeMode::zscore;
    if (name == "minmax") return NormalizeMode::minmax;
    throw ValidationError("unknown normalization mode \"" + name + "\" (expected none, zscore, minmax)");
}

std::pair<Dataset, Normalization> normalize(const Dataset& dataset, NormalizeMode mode,
                                            std::span<const std::size_t> columns) {
    Normalization norm{mode, {}};
    if (mode == NormalizeMode::none) return {dataset, norm};

    const std::size_t b = dataset.dimension();
    const std::size_t n = dataset.size();
    std::vector<std::size_t> selected(columns.begin(), columns.end());
    if (selected.empty())
        for (std::size_t c = 0; c <= b; ++c) selected.push_back(c);

    std::vector<double> x(dataset.predictors().begin(), dataset.predictors().end());
    std::vector<double> y(dataset.responses().begin(), dataset.responses().end());
    std::vector<double> column(n);

    for (std::size_t c : selected) {
        if (c > b) throw ValidationError("normalize: column index " + std::to_string(c) + " out of range");
        const std::string name = c == b ? dataset.response_name() : dataset.predictor_names()[c];
        for (std::size_t i = 0; i < n; ++i) column[i] = c == b ? y[i] : x[i * b + c];

        ColumnTransform t{c, name, 0.0, 1.0};
        if (mode == NormalizeMode::zscore) {
            t.offset = mean(column);
            t.scale = std::sqrt(population_variance(column));
        } else {
            const auto [lo, hi] = std::minmax_element(column.begin(), column.end());
            t.offset = *lo;
            t.scale = *hi - *lo;
        }
        if (!(t.scale > 0.0)) throw DegenerateError("normalize: column \"" + name + "\" has zero spread");

        for (std::size_t i = 0; i < n; ++i) {
            double& v = c == b ? y[i] : x[i * b + c];
            v = (v - t.offset) / t.scale;
        }
        norm.columns.push_back(std::move(t));
    }
    return {Dataset(b, std::move(x), std::move(y), dataset.predictor_names(), dataset.response_name()), norm};
}

Dataset denormalize(const Dataset& dataset, const Normalization& normalization) {
    const std::size_t b = dataset.dimension();
    std::vector<double> x(dataset.predictors().begin(), dataset.predictors().end());
    std::vector<double> y(dataset.responses().begin(), dataset.responses().end());
    for (const auto& t : normalization.columns) {
        if (t.column > b) throw ValidationError("denormalize: column index out of range");
        for (std::size_t i = 0; i < dataset.size(); ++i) {
            double& v = t.column == b ? y[i] : x[i * b + t.column];
            v = v * t.scale + t.offset;
        }
    }
    return Dataset(b, std::move(x), std::move(y), dataset.predictor_names(), dataset.response_name());
}

}  // namespace xreg
