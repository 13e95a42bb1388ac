#include "xreg/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include "xreg/error.hpp"
#include "xreg/numeric.hpp"
#include "xreg/random.hpp"
#include "xreg/serialization.hpp"

namespace xreg {

double mae(std::span<const double> pred, std::span<const double> target) {
    if (pred.size() != target.size()) throw ValidationError("mae: length mismatch");
    if (pred.empty()) throw ValidationError("mae: empty input");
    CompensatedSum s;
    for (std::size_t i = 0; i < pred.size(); ++i) s.add(std::abs(pred[i] - target[i]));
    return s.value() / static_cast<double>(pred.size());
}

double rmse(std::span<const double> pred, std::span<const double> target) {
    if (pred.size() != target.size()) throw ValidationError("rmse: length mismatch");
    if (pred.empty()) throw ValidationError("rmse: empty input");
    CompensatedSum s;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double d = pred[i] - target[i];
        s.add(d * d);
    }
    return std::sqrt(s.value() / static_cast<double>(pred.size()));
}

double percent_advantage(double err_base, double err_new) {
    if (!(err_new > 0.0)) throw ValidationError("percent_advantage requires err_new > 0");
    return (err_base / err_new - 1.0) * 100.0;
}

Split split(const Dataset& dataset, double test_fraction, std::uint64_t seed) {
    if (!(test_fraction > 0.0 && test_fraction < 1.0)) throw ValidationError("test_fraction must lie in (0, 1)");
    const std::size_t n = dataset.size();
    const auto raw = static_cast<std::size_t>(std::floor(static_cast<double>(n) * test_fraction));
    const std::size_t n_test = std::max<std::size_t>(1, raw);
    if (n_test >= n)
        throw ValidationError("split of " + std::to_string(n) + " samples leaves an empty training part");

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    SplitMix64 rng(seed);
    for (std::size_t i = n - 1; i > 0; --i) std::swap(order[i], order[rng.below(i + 1)]);

    std::vector<std::size_t> test(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_test));
    std::vector<std::size_t> train(order.begin() + static_cast<std::ptrdiff_t>(n_test), order.end());
    return Split{dataset.subset(train), dataset.subset(test), std::move(train), std::move(test)};
}

std::string to_string(TuningMode m) {
    switch (m) {
        case TuningMode::none: return "none";
        case TuningMode::variance: return "variance";
        case TuningMode::iterate: return "iterate";
        case TuningMode::two_param: return "two_param";
    }
    return "unknown";
}

TuningMode tuning_mode_from_string(const std::string& name) {
    if (name == "none") return TuningMode::none;
    if (name == "variance") return TuningMode::variance;
    if (name == "iterate") return TuningMode::iterate;
    if (name == "two_param" || name == "two-param") return TuningMode::two_param;
    throw ValidationError("unknown tuning mode \"" + name + "\" (expected none, variance, iterate, two_param)");
}

// ---------------------------------------------------------------------------
// Config JSON

namespace {

template <class T>
void read_opt(const json& j, const char* key, T& out, const std::string& what) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ValidationError(what + ": field \"" + key + "\" has the wrong type");
    }
}

}  // namespace

void to_json(json& j, const BenchConfig& c) {
    json data{{"csv_path", c.data.csv_path},
              {"response_column", c.data.response_column},
              {"test_fraction", c.data.test_fraction},
              {"split_seed", c.data.split_seed},
              {"normalize", to_string(c.data.normalize)}};
    data["synthetic"] = c.data.synthetic ? json(*c.data.synthetic) : json(nullptr);
    j = json{{"data", data},
             {"methods", c.methods},
             {"xaxis",
              {{"kernel", c.xaxis.kernel},
               {"tuning", to_string(c.xaxis.tuning)},
               {"r_min", c.xaxis.r_bounds.lo},
               {"r_max", c.xaxis.r_bounds.hi},
               {"explained_fraction", c.xaxis.explained_fraction},
               {"max_rounds", c.xaxis.max_rounds},
               {"damping", c.xaxis.damping},
               {"q_min", c.xaxis.q_lo},
               {"q_max", c.xaxis.q_hi},
               {"lambda_var", c.xaxis.lambda_var},
               {"lambda_fit", c.xaxis.lambda_fit},
               {"policy", to_string(c.xaxis.policy)}}},
             {"lasso",
              {{"degree", c.lasso.degree},
               {"lambda", c.lasso.lambda ? json(*c.lasso.lambda) : json(nullptr)},
               {"lambda_min", c.lasso.lambda_min},
               {"lambda_max", c.lasso.lambda_max},
               {"lambda_count", c.lasso.lambda_count},
               {"k_folds", c.lasso.k_folds},
               {"tol", c.lasso.tol},
               {"max_iter", c.lasso.max_iter}}},
             {"eval", {{"grid_points", c.eval.grid_points}, {"edge_fraction", c.eval.edge_fraction}}},
             {"threads", c.threads}};
}

void from_json(const json& j, BenchConfig& c) {
    c = BenchConfig{};
    detail::require_keys(j, {"schema_version", "data", "methods", "xaxis", "lasso", "eval", "threads"},
                         "bench config");
    if (!j.contains("data")) throw ValidationError("bench config: missing \"data\" section");

    const json& d = j.at("data");
    detail::require_keys(d, {"synthetic", "csv_path", "response_column", "test_fraction", "split_seed", "normalize"},
                         "bench config data");
    if (d.contains("synthetic") && !d.at("synthetic").is_null()) c.data.synthetic = d.at("synthetic").get<SynthSpec>();
    read_opt(d, "csv_path", c.data.csv_path, "data");
    read_opt(d, "response_column", c.data.response_column, "data");
    read_opt(d, "test_fraction", c.data.test_fraction, "data");
    read_opt(d, "split_seed", c.data.split_seed, "data");
    std::string norm = "none";
    read_opt(d, "normalize", norm, "data");
    c.data.normalize = normalize_mode_from_string(norm);
    if (c.data.synthetic.has_value() == !c.data.csv_path.empty())
        throw ValidationError("bench config data needs exactly one of \"synthetic\" or \"csv_path\"");

    read_opt(j, "methods", c.methods, "bench config");
    read_opt(j, "threads", c.threads, "bench config");

    if (j.contains("xaxis")) {
        const json& x = j.at("xaxis");
        detail::require_keys(x,
                             {"kernel", "tuning", "r_min", "r_max", "explained_fraction", "max_rounds", "damping",
                              "q_min", "q_max", "lambda_var", "lambda_fit", "policy"},
                             "bench config xaxis");
        if (x.contains("kernel")) c.xaxis.kernel = x.at("kernel").get<KernelSpec>();
        std::string tuning = to_string(c.xaxis.tuning);
        read_opt(x, "tuning", tuning, "xaxis");
        c.xaxis.tuning = tuning_mode_from_string(tuning);
        read_opt(x, "r_min", c.xaxis.r_bounds.lo, "xaxis");
        read_opt(x, "r_max", c.xaxis.r_bounds.hi, "xaxis");
        read_opt(x, "explained_fraction", c.xaxis.explained_fraction, "xaxis");
        read_opt(x, "max_rounds", c.xaxis.max_rounds, "xaxis");
        read_opt(x, "damping", c.xaxis.damping, "xaxis");
        read_opt(x, "q_min", c.xaxis.q_lo, "xaxis");
        read_opt(x, "q_max", c.xaxis.q_hi, "xaxis");
        read_opt(x, "lambda_var", c.xaxis.lambda_var, "xaxis");
        read_opt(x, "lambda_fit", c.xaxis.lambda_fit, "xaxis");
        std::string policy = to_string(c.xaxis.policy);
        read_opt(x, "policy", policy, "xaxis");
        c.xaxis.policy = exact_match_policy_from_string(policy);
    }
    if (j.contains("lasso")) {
        const json& l = j.at("lasso");
        detail::require_keys(l, {"degree", "lambda", "lambda_min", "lambda_max", "lambda_count", "k_folds", "tol",
                                 "max_iter"},
                             "bench config lasso");
        read_opt(l, "degree", c.lasso.degree, "lasso");
        if (l.contains("lambda") && !l.at("lambda").is_null()) {
            double v = 0.0;
            read_opt(l, "lambda", v, "lasso");
            c.lasso.lambda = v;
        }
        read_opt(l, "lambda_min", c.lasso.lambda_min, "lasso");
        read_opt(l, "lambda_max", c.lasso.lambda_max, "lasso");
        read_opt(l, "lambda_count", c.lasso.lambda_count, "lasso");
        read_opt(l, "k_folds", c.lasso.k_folds, "lasso");
        read_opt(l, "tol", c.lasso.tol, "lasso");
        read_opt(l, "max_iter", c.lasso.max_iter, "lasso");
    }
    if (j.contains("eval")) {
        const json& e = j.at("eval");
        detail::require_keys(e, {"grid_points", "edge_fraction"}, "bench config eval");
        read_opt(e, "grid_points", c.eval.grid_points, "eval");
        read_opt(e, "edge_fraction", c.eval.edge_fraction, "eval");
    }

    if (c.methods.empty()) throw ValidationError("bench config: methods must not be empty");
    for (const auto& m : c.methods)
        if (m != "xaxis" && m != "lasso") throw ValidationError("bench config: unknown method \"" + m + "\"");
    if (c.eval.grid_points < 2) throw ValidationError("bench config: eval.grid_points must be >= 2");
    if (!(c.eval.edge_fraction >= 0.0 && c.eval.edge_fraction < 0.5))
        throw ValidationError("bench config: eval.edge_fraction must lie in [0, 0.5)");
}

namespace {

std::string read_file(const std::filesystem::path& path, const char* what) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError(std::string("cannot open ") + what + " " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

BenchConfig load_bench_config(const std::filesystem::path& path) {
    BenchConfig c = parse_json(read_file(path, "bench config"), "bench config " + path.string()).get<BenchConfig>();
    if (!c.data.csv_path.empty() && std::filesystem::path(c.data.csv_path).is_relative())
        c.data.csv_path = (path.parent_path() / c.data.csv_path).lexically_normal().string();
    return c;
}

std::string fnv1a64_hex(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// ---------------------------------------------------------------------------
// Running

const MethodResult* BenchmarkReport::method(const std::string& name) const {
    for (const auto& m : methods)
        if (m.name == name) return &m;
    return nullptr;
}

namespace {

template <class F>
auto staged(const char* stage, F&& body) -> decltype(body()) {
    const std::string prefix = std::string("[") + stage + "] ";
    try {
        return body();
    } catch (const ValidationError& e) {
        throw ValidationError(prefix + e.what());
    } catch (const DataError& e) {
        throw DataError(prefix + e.what());
    } catch (const DegenerateError& e) {
        throw DegenerateError(prefix + e.what());
    } catch (const SingularityError& e) {
        throw SingularityError(prefix + e.what());
    } catch (const Error& e) {
        throw Error(prefix + e.what());
    }
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

Metrics metrics_of(std::span<const double> pred, std::span<const double> target) {
    if (pred.empty()) return {};
    return Metrics{mae(pred, target), rmse(pred, target), pred.size()};
}

MethodResult run_xaxis(const BenchConfig& cfg, const Dataset& train, const BenchmarkReport& report) {
    const auto start = std::chrono::steady_clock::now();
    const XAxisConfig& x = cfg.xaxis;
    MethodResult out;
    out.name = "xaxis";

    std::optional<TuningResult> tuned;
    KernelSpec kernel = x.kernel;
    staged("tune", [&] {
        switch (x.tuning) {
            case TuningMode::none: kernel.validate(); break;
            case TuningMode::variance:
                tuned = tune_r(train, x.kernel, x.r_bounds, x.explained_fraction, cfg.threads);
                break;
            case TuningMode::iterate:
                tuned = iterate_randomness(train, x.kernel, x.max_rounds, x.damping, x.r_bounds, cfg.threads);
                break;
            case TuningMode::two_param: {
                TwoParamOptions opts;
                opts.r_bounds = x.r_bounds;
                opts.q_lo = x.q_lo;
                opts.q_hi = x.q_hi;
                opts.lambda_var = x.lambda_var;
                opts.lambda_fit = x.lambda_fit;
                opts.threads = cfg.threads;
                tuned = tune_two_param(train, opts, x.kernel.multidim_mode);
                break;
            }
        }
        if (tuned) kernel = tuned->kernel;
    });

    staged("eval", [&] {
        out.predictions = predict_grid(report.eval_points, train, kernel, x.policy, cfg.threads).values;
    });
    out.details = json{{"kernel", kernel}, {"kernel_description", describe(kernel)}};
    out.details["tuning"] = tuned ? json(*tuned) : json(nullptr);
    out.runtime_seconds = seconds_since(start);
    return out;
}

MethodResult run_lasso(const BenchConfig& cfg, const Dataset& train, const BenchmarkReport& report) {
    const auto start = std::chrono::steady_clock::now();
    const LassoConfig& l = cfg.lasso;
    MethodResult out;
    out.name = "lasso";
    if (train.dimension() != 1) throw ValidationError("[fit] polynomial lasso needs one predictor");

    double lambda = 0.0;
    json selection = nullptr;
    staged("tune", [&] {
        if (l.lambda) {
            lambda = *l.lambda;
            return;
        }
        const auto grid = log_grid(l.lambda_min, l.lambda_max, l.lambda_count);
        const LambdaSelection sel = select_lambda(train, l.degree, grid, l.k_folds, l.tol, l.max_iter);
        lambda = sel.lambda;
        selection = json{{"lambda_grid", sel.grid}, {"cv_errors", sel.cv_errors}, {"cv_error", sel.cv_error}};
    });

    LassoModel model;
    staged("fit", [&] {
        LassoOptions opts;
        opts.tol = l.tol;
        opts.max_iter = l.max_iter;
        model = fit_lasso(train, l.degree, lambda, opts);
    });
    staged("eval", [&] {
        out.predictions.reserve(report.eval_points.size());
        for (const auto& p : report.eval_points) out.predictions.push_back(predict_lasso(model, p[0]));
    });
    out.details = json{{"model", model}, {"lambda", lambda}, {"selection", selection}};
    out.runtime_seconds = seconds_since(start);
    return out;
}

}  // namespace

std::pair<Metrics, Metrics> score(const BenchmarkReport& report, std::span<const double> predictions) {
    if (predictions.size() != report.targets.size())
        throw ValidationError("prediction count does not match the evaluation targets");
    std::vector<double> pi, ti, pe, te;
    for (std::size_t k = 0; k < predictions.size(); ++k) {
        if (report.interior[k]) {
            pi.push_back(predictions[k]);
            ti.push_back(report.targets[k]);
        } else {
            pe.push_back(predictions[k]);
            te.push_back(report.targets[k]);
        }
    }
    return {metrics_of(pi, ti), metrics_of(pe, te)};
}

BenchmarkReport run_benchmark(const BenchConfig& config) {
    BenchmarkReport report;
    report.config = config;

    const Dataset train = staged("data", [&]() -> Dataset {
        if (config.data.synthetic) {
            const SynthSpec& spec = *config.data.synthetic;
            report.data_source = "synthetic";
            const Dataset ds = gen_synthetic(spec);
            const std::size_t b = spec.domain.size();
            const auto per_axis = b == 1 ? config.eval.grid_points
                                         : static_cast<std::size_t>(std::ceil(std::pow(
                                               static_cast<double>(config.eval.grid_points), 1.0 / b)));
            std::vector<std::vector<double>> axes;
            for (const auto& d : spec.domain) axes.push_back(linspace(d.lo, d.hi, per_axis));
            report.eval_points = product_grid(axes);
            for (const auto& p : report.eval_points) {
                report.targets.push_back(spec.target(p));
                bool inside = true;
                for (std::size_t a = 0; a < b; ++a) {
                    const double margin = config.eval.edge_fraction * (spec.domain[a].hi - spec.domain[a].lo);
                    inside = inside && p[a] >= spec.domain[a].lo + margin && p[a] <= spec.domain[a].hi - margin;
                }
                report.interior.push_back(inside);
            }
            return ds;
        }
        report.data_source = "csv";
        const std::string bytes = read_file(config.data.csv_path, "CSV file");
        report.file_hash = "fnv1a64:" + fnv1a64_hex(bytes);
        Dataset ds = parse_csv(bytes, config.data.response_column);
        ds = normalize(ds, config.data.normalize).first;
        Split parts = split(ds, config.data.test_fraction, config.data.split_seed);
        for (std::size_t i = 0; i < parts.test.size(); ++i) {
            const auto xi = parts.test.x(i);
            report.eval_points.emplace_back(xi.begin(), xi.end());
            report.targets.push_back(parts.test.y(i));
            report.interior.push_back(true);
        }
        return parts.train;
    });
    report.n_train = train.size();

    for (const auto& name : config.methods) {
        MethodResult m = name == "xaxis" ? run_xaxis(config, train, report) : run_lasso(config, train, report);
        std::tie(m.metrics, m.edge_metrics) = score(report, m.predictions);
        report.methods.push_back(std::move(m));
    }

    const MethodResult* xa = report.method("xaxis");
    const MethodResult* la = report.method("lasso");
    if (xa && la && xa->metrics.count > 0 && xa->metrics.mae > 0.0)
        report.percent_advantage = percent_advantage(la->metrics.mae, xa->metrics.mae);
    return report;
}

double consistency_error(const BenchmarkReport& report) {
    double worst = 0.0;
    for (const auto& m : report.methods) {
        const auto [head, edge] = score(report, m.predictions);
        worst = std::max({worst, std::abs(head.mae - m.metrics.mae), std::abs(head.rmse - m.metrics.rmse),
                          std::abs(edge.mae - m.edge_metrics.mae), std::abs(edge.rmse - m.edge_metrics.rmse)});
    }
    const MethodResult* xa = report.method("xaxis");
    const MethodResult* la = report.method("lasso");
    if (report.percent_advantage && xa && la) {
        const double recomputed =
            percent_advantage(score(report, la->predictions).first.mae, score(report, xa->predictions).first.mae);
        worst = std::max(worst, std::abs(recomputed - *report.percent_advantage));
    }
    return worst;
}

// ---------------------------------------------------------------------------
// Persistence

namespace {

json metrics_json(const Metrics& m) { return json{{"mae", m.mae}, {"rmse", m.rmse}, {"count", m.count}}; }

Metrics metrics_from_json(const json& j) {
    return Metrics{j.at("mae").get<double>(), j.at("rmse").get<double>(), j.at("count").get<std::size_t>()};
}

std::vector<std::string> point_columns(std::size_t b) {
    if (b == 1) return {"x"};
    std::vector<std::string> cols;
    for (std::size_t a = 0; a < b; ++a) cols.push_back("d" + std::to_string(a + 1));
    return cols;
}

}  // namespace

json report_to_json(const BenchmarkReport& report, const std::string& predictions_file) {
    json methods = json::object();
    std::vector<std::string> order;
    for (const auto& m : report.methods) {
        order.push_back(m.name);
        json entry{{"metrics", metrics_json(m.metrics)},
                   {"runtime_seconds", m.runtime_seconds},
                   {"details", m.details}};
        entry["edge_metrics"] = m.edge_metrics.count ? metrics_json(m.edge_metrics) : json(nullptr);
        methods[m.name] = entry;
    }
    std::size_t n_interior = 0;
    for (bool b : report.interior) n_interior += b ? 1 : 0;
    json out{{"schema_version", BenchmarkReport::kSchemaVersion},
             {"config", report.config},
             {"data",
              {{"source", report.data_source},
               {"file_hash", report.file_hash},
               {"n_train", report.n_train},
               {"n_eval", report.targets.size()},
               {"n_interior", n_interior}}},
             {"method_order", order},
             {"methods", methods},
             {"predictions_file", predictions_file}};
    out["percent_advantage"] = report.percent_advantage ? json(*report.percent_advantage) : json(nullptr);
    return out;
}

std::string predictions_to_csv(const BenchmarkReport& report) {
    const std::size_t b = report.eval_points.empty() ? 1 : report.eval_points.front().size();
    std::string out;
    for (const auto& c : point_columns(b)) out += c + ",";
    out += "target,region";
    for (const auto& m : report.methods) out += "," + m.name;
    out += "\n";
    for (std::size_t k = 0; k < report.targets.size(); ++k) {
        for (double v : report.eval_points[k]) out += format_double(v) + ",";
        out += format_double(report.targets[k]);
        out += report.interior[k] ? ",interior" : ",edge";
        for (const auto& m : report.methods) out += "," + format_double(m.predictions[k]);
        out += "\n";
    }
    return out;
}

void write_report(const BenchmarkReport& report, const std::filesystem::path& json_path,
                  const std::filesystem::path& csv_path) {
    std::string sidecar = csv_path.string();
    if (csv_path.parent_path() == json_path.parent_path()) sidecar = csv_path.filename().string();
    {
        std::ofstream out(json_path, std::ios::binary);
        if (!out) throw DataError("cannot write report " + json_path.string());
        out << report_to_json(report, sidecar).dump(2) << "\n";
    }
    std::ofstream out(csv_path, std::ios::binary);
    if (!out) throw DataError("cannot write predictions " + csv_path.string());
    out << predictions_to_csv(report);
}

BenchmarkReport load_report(const std::filesystem::path& json_path) {
    const json j = parse_json(read_file(json_path, "report"), "report " + json_path.string());
    if (j.value("schema_version", 0) != BenchmarkReport::kSchemaVersion)
        throw DataError("unsupported report schema_version in " + json_path.string());

    BenchmarkReport r;
    r.config = j.at("config").get<BenchConfig>();
    r.data_source = j.at("data").at("source").get<std::string>();
    r.file_hash = j.at("data").at("file_hash").get<std::string>();
    r.n_train = j.at("data").at("n_train").get<std::size_t>();
    if (!j.at("percent_advantage").is_null()) r.percent_advantage = j.at("percent_advantage").get<double>();
    for (const auto& name : j.at("method_order")) {
        const json& m = j.at("methods").at(name.get<std::string>());
        MethodResult res;
        res.name = name.get<std::string>();
        res.metrics = metrics_from_json(m.at("metrics"));
        if (!m.at("edge_metrics").is_null()) res.edge_metrics = metrics_from_json(m.at("edge_metrics"));
        res.runtime_seconds = m.at("runtime_seconds").get<double>();
        res.details = m.at("details");
        r.methods.push_back(std::move(res));
    }

    std::filesystem::path csv_path = j.at("predictions_file").get<std::string>();
    if (csv_path.is_relative()) csv_path = json_path.parent_path() / csv_path;
    const std::string text = read_file(csv_path, "predictions");
    std::istringstream lines(text);
    std::string line;
    std::getline(lines, line);
    std::vector<std::string> header;
    {
        std::stringstream hs(line);
        std::string cell;
        while (std::getline(hs, cell, ',')) header.push_back(cell);
    }
    const auto region_col = static_cast<std::size_t>(
        std::find(header.begin(), header.end(), "region") - header.begin());
    if (region_col < 1 || region_col >= header.size() || header.size() != region_col + 1 + r.methods.size())
        throw DataError("malformed predictions file " + csv_path.string());
    const std::size_t b = region_col - 1;
    std::size_t row = 0;
    while (std::getline(lines, line)) {
        if (line.empty()) continue;
        ++row;
        std::vector<std::string> cells;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (cells.size() != header.size())
            throw DataError("predictions row " + std::to_string(row) + " has the wrong field count");
        auto num = [&](std::size_t c) {
            double v = 0.0;
            if (!parse_double(cells[c], v))
                throw DataError("predictions row " + std::to_string(row) + ", column \"" + header[c] +
                                "\" is not a number");
            return v;
        };
        std::vector<double> p(b);
        for (std::size_t a = 0; a < b; ++a) p[a] = num(a);
        r.eval_points.push_back(std::move(p));
        r.targets.push_back(num(b));
        r.interior.push_back(cells[region_col] == "interior");
        for (std::size_t m = 0; m < r.methods.size(); ++m) r.methods[m].predictions.push_back(num(region_col + 1 + m));
    }
    return r;
}

}  // namespace xreg
