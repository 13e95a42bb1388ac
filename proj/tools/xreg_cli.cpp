// xreg command-line front end.
//
// Exit status: 0 success, 1 runtime failure, 2 usage or validation error.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "xreg/bench.hpp"
#include "xreg/dataset.hpp"
#include "xreg/error.hpp"
#include "xreg/estimator.hpp"
#include "xreg/kernels.hpp"
#include "xreg/numeric.hpp"
#include "xreg/serialization.hpp"
#include "xreg/tuning.hpp"

namespace fs = std::filesystem;
using namespace xreg;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

std::string read_text(const fs::path& path, const char* what) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError(std::string("cannot open ") + what + " " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    out << text;
    if (!out) throw DataError("cannot write " + path.string());
}

// "a,b" -> two finite numbers.
std::pair<double, double> parse_pair(const std::string& text, const char* flag) {
    const auto comma = text.find(',');
    double a = 0.0;
    double b = 0.0;
    if (comma == std::string::npos || !parse_double(std::string_view(text).substr(0, comma), a) ||
        !parse_double(std::string_view(text).substr(comma + 1), b))
        throw ValidationError(std::string(flag) + " expects two numbers as lo,hi (got \"" + text + "\")");
    return {a, b};
}

std::vector<double> parse_list(const std::string& text, const char* flag) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        double v = 0.0;
        if (!parse_double(item, v))
            throw ValidationError(std::string(flag) + " expects comma separated numbers (got \"" + text + "\")");
        out.push_back(v);
    }
    if (out.empty()) throw ValidationError(std::string(flag) + " needs at least one number");
    return out;
}

// start:end:count, inclusive of both ends.
std::vector<double> parse_grid_axis(const std::string& text) {
    const auto a = text.find(':');
    const auto b = a == std::string::npos ? a : text.find(':', a + 1);
    double lo = 0.0;
    double hi = 0.0;
    double count = 0.0;
    const std::string_view v(text);
    if (b == std::string::npos || !parse_double(v.substr(0, a), lo) || !parse_double(v.substr(a + 1, b - a - 1), hi) ||
        !parse_double(v.substr(b + 1), count))
        throw ValidationError("--grid expects start:end:count (got \"" + text + "\")");
    if (count < 1 || count != std::floor(count)) throw ValidationError("--grid count must be a positive integer");
    if (count == 1 && lo != hi) throw ValidationError("--grid with count 1 needs start == end");
    if (count == 1) return {lo};
    return linspace(lo, hi, static_cast<std::size_t>(count));
}

// ---------------------------------------------------------------------------
// Kernel flags shared by fit, plotdata and tune.

struct KernelFlags {
    std::string family = "exp_base";
    std::optional<double> r;
    std::optional<double> p;
    std::optional<double> k;
    std::optional<double> q;
    std::string mode = "sum";
    std::string json_path;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--kernel", family, "kernel family")
            ->check(CLI::IsMember({"inverse_power", "inverse_power_shifted", "exp_base", "exp_base_shifted",
                                   "uniform"}));
        cmd->add_option("--r", r, "exponential base (> 1)");
        cmd->add_option("--p", p, "inverse power exponent (> 0)");
        cmd->add_option("--k", k, "inverse power shift");
        cmd->add_option("--q", q, "exponential shift");
        cmd->add_option("--mode", mode, "multi-dimensional combination")->check(CLI::IsMember({"sum", "product"}));
        cmd->add_option("--kernel-json", json_path, "KernelSpec JSON file (overrides the inline flags)");
    }

    KernelSpec resolve() const {
        if (!json_path.empty())
            return parse_json(read_text(json_path, "kernel file"), "kernel file " + json_path).get<KernelSpec>();
        KernelSpec spec;
        spec.family = kernel_family_from_string(family);
        spec.multidim_mode = multidim_mode_from_string(mode);
        if (r) spec.base = *r;
        if (p) spec.power = *p;
        if (spec.family == KernelFamily::inverse_power_shifted) spec.shift = k.value_or(0.0);
        if (spec.family == KernelFamily::exp_base_shifted) spec.shift = q.value_or(0.0);
        if (k && spec.family != KernelFamily::inverse_power_shifted)
            throw ValidationError("--k applies to inverse_power_shifted only");
        if (q && spec.family != KernelFamily::exp_base_shifted)
            throw ValidationError("--q applies to exp_base_shifted only");
        spec.validate();
        return spec;
    }
};

// ---------------------------------------------------------------------------
// gen

struct GenArgs {
    std::string spec_path;
    std::string fn = "sine";
    std::size_t n = 100;
    std::uint64_t seed = 0;
    std::string noise = "1,1";
    std::vector<std::string> domain;
    std::string coeffs;
    std::string out;
};

int cmd_gen(const GenArgs& a, const CLI::App& cmd) {
    SynthSpec spec;
    if (!a.spec_path.empty()) {
        for (const char* flag : {"--fn", "--n", "--seed", "--noise", "--domain", "--coeffs"})
            if (cmd.count(flag) > 0) throw ValidationError(std::string(flag) + " cannot be combined with --spec");
        spec = parse_json(read_text(a.spec_path, "spec file"), "spec file " + a.spec_path).get<SynthSpec>();
    } else {
        spec.target_function = target_function_from_string(a.fn);
        spec.n = a.n;
        spec.seed = a.seed;
        std::tie(spec.noise_low, spec.noise_high) = parse_pair(a.noise, "--noise");
        spec.domain.clear();
        if (a.domain.empty()) {
            spec.domain.push_back({0.0, 1.0});
        } else {
            for (const auto& d : a.domain) {
                const auto [lo, hi] = parse_pair(d, "--domain");
                spec.domain.push_back({lo, hi});
            }
        }
        if (!a.coeffs.empty()) spec.coefficients = parse_list(a.coeffs, "--coeffs");
        spec.validate();
    }
    const Dataset ds = gen_synthetic(spec);
    write_csv(ds, a.out);
    std::cout << json(spec).dump(2) << '\n';
    return 0;
}

// ---------------------------------------------------------------------------
// fit / plotdata

struct FitArgs {
    std::string data;
    std::string response = "y";
    KernelFlags kernel;
    std::vector<std::string> grid;
    std::size_t default_count = 101;
    std::string policy = "return_mean_of_matches";
    unsigned threads = 1;
    std::string out;
    std::string points_out;
};

PredictionCurve run_fit(const FitArgs& a, Dataset& ds) {
    const KernelSpec kernel = a.kernel.resolve();
    const ExactMatchPolicy policy = exact_match_policy_from_string(a.policy);
    ds = load_csv(a.data, a.response);
    std::vector<std::vector<double>> axes;
    if (a.grid.empty()) {
        for (std::size_t d = 0; d < ds.dimension(); ++d) {
            const auto [lo, hi] = ds.predictor_range(d);
            axes.push_back(lo == hi ? std::vector<double>{lo} : linspace(lo, hi, a.default_count));
        }
    } else {
        if (a.grid.size() != ds.dimension())
            throw ValidationError("--grid given " + std::to_string(a.grid.size()) + " time(s) but the data has " +
                                  std::to_string(ds.dimension()) + " predictor(s)");
        for (const auto& g : a.grid) axes.push_back(parse_grid_axis(g));
    }
    return predict_grid(product_grid(axes), ds, kernel, policy, a.threads);
}

void emit(const std::string& text, const std::string& path) {
    if (path.empty() || path == "-") {
        std::cout << text;
    } else {
        write_text(path, text);
    }
}

int cmd_fit(const FitArgs& a) {
    Dataset ds = Dataset::from_xy({0.0}, {0.0});
    emit(curve_to_csv(run_fit(a, ds)), a.out);
    return 0;
}

int cmd_plotdata(const FitArgs& a) {
    Dataset ds = Dataset::from_xy({0.0}, {0.0});
    const PredictionCurve curve = run_fit(a, ds);
    write_text(a.out, curve_to_csv(curve));

    fs::path points = a.points_out;
    if (points.empty()) {
        fs::path p(a.out);
        points = p.parent_path() / (p.stem().string() + ".points.csv");
    }
    std::string text;
    for (std::size_t d = 0; d < ds.dimension(); ++d) text += "d" + std::to_string(d + 1) + ",";
    text += "value,role\n";
    for (std::size_t i = 0; i < ds.size(); ++i) {
        for (double v : ds.x(i)) text += format_double(v) + ",";
        text += format_double(ds.y(i)) + ",given\n";
    }
    for (std::size_t i = 0; i < curve.grid.size(); ++i) {
        for (double v : curve.grid[i]) text += format_double(v) + ",";
        text += format_double(curve.values[i]) + ",estimate\n";
    }
    write_text(points, text);
    return 0;
}

// ---------------------------------------------------------------------------
// tune

struct TuneArgs {
    std::string data;
    std::string response = "y";
    std::string mode = "iterate";
    std::string mdmode = "sum";
    std::string family = "exp_base";
    double r_min = RBounds{}.lo;
    double r_max = RBounds{}.hi;
    double ef = 1.0;
    std::size_t max_rounds = 20;
    double damping = 0.5;
    double q_min = 0.0;
    double q_max = 100.0;
    double lambda_var = 0.7;
    double lambda_fit = 0.3;
    unsigned threads = 1;
    std::string out;
};

int cmd_tune(const TuneArgs& a) {
    const Dataset ds = load_csv(a.data, a.response);
    const RBounds bounds{a.r_min, a.r_max};
    const MultidimMode md = multidim_mode_from_string(a.mdmode);
    TuningResult res;
    if (a.mode == "variance" || a.mode == "iterate") {
        KernelSpec family = a.family == "exp_base_shifted" ? KernelSpec::exp_base_shifted(2.0, 0.0, md)
                                                           : KernelSpec::exp_base(2.0, md);
        res = a.mode == "variance" ? tune_r(ds, family, bounds, a.ef, a.threads)
                                   : iterate_randomness(ds, family, a.max_rounds, a.damping, bounds, a.threads);
    } else {
        TwoParamOptions o;
        o.r_bounds = bounds;
        o.q_lo = a.q_min;
        o.q_hi = a.q_max;
        o.lambda_var = a.lambda_var;
        o.lambda_fit = a.lambda_fit;
        o.threads = a.threads;
        res = tune_two_param(ds, o, md);
    }

    const json settings{{"data", a.data},
                        {"response", a.response},
                        {"mode", a.mode},
                        {"family", a.family},
                        {"multidim_mode", a.mdmode},
                        {"r_min", a.r_min},
                        {"r_max", a.r_max},
                        {"explained_fraction", a.ef},
                        {"max_rounds", a.max_rounds},
                        {"damping", a.damping},
                        {"q_min", a.q_min},
                        {"q_max", a.q_max},
                        {"lambda_var", a.lambda_var},
                        {"lambda_fit", a.lambda_fit}};
    const json doc{{"schema_version", 1}, {"command", "tune"}, {"settings", settings}, {"result", res}};
    emit(doc.dump(2) + "\n", a.out);

    if (!a.out.empty() && a.out != "-") {
        std::cout << "kernel " << describe(res.kernel) << '\n'
                  << "variance_ratio " << format_double(res.variance_ratio) << '\n'
                  << "explained_fraction " << format_double(res.explained_fraction) << '\n'
                  << "randomness_index " << format_double(res.randomness_index) << '\n'
                  << "rounds " << res.rounds.size() << (res.converged ? "" : " (not converged)") << '\n';
    }
    return 0;
}

// ---------------------------------------------------------------------------
// bench

struct BenchArgs {
    std::string config;
    std::string out = "report.json";
    std::string predictions;
    std::vector<double> advantage;
};

int cmd_bench(const BenchArgs& a) {
    if (!a.advantage.empty()) {
        std::printf("%.6g\n", percent_advantage(a.advantage[0], a.advantage[1]));
        return 0;
    }
    if (a.config.empty()) throw ValidationError("bench needs a config file (or --print-advantage)");
    const BenchConfig cfg = load_bench_config(a.config);
    const BenchmarkReport report = run_benchmark(cfg);
    fs::path csv = a.predictions;
    if (csv.empty()) {
        fs::path p(a.out);
        csv = p.parent_path() / (p.stem().string() + ".predictions.csv");
    }
    write_report(report, a.out, csv);
    for (const auto& m : report.methods) {
        std::printf("%-6s mae %.6g rmse %.6g (n=%zu) edge mae %.6g  %.2fs\n", m.name.c_str(), m.metrics.mae,
                    m.metrics.rmse, m.metrics.count, m.edge_metrics.mae, m.runtime_seconds);
    }
    if (report.percent_advantage) std::printf("percent advantage %.6g\n", *report.percent_advantage);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"xreg: pointwise distance-weighted regression toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "xreg 0.1.0");

    GenArgs gen;
    auto* g = app.add_subcommand("gen", "generate a synthetic dataset");
    g->add_option("--spec", gen.spec_path, "SynthSpec JSON file")->check(CLI::ExistingFile);
    g->add_option("--fn", gen.fn, "target function")->check(CLI::IsMember({"square", "sine", "linear", "polynomial"}));
    g->add_option("--n", gen.n, "number of samples");
    g->add_option("--seed", gen.seed, "random seed");
    g->add_option("--noise", gen.noise, "noise multiplier bounds lo,hi");
    g->add_option("--domain", gen.domain, "predictor interval lo,hi (repeat per dimension)");
    g->add_option("--coeffs", gen.coeffs, "ascending polynomial coefficients a0,a1,...");
    g->add_option("-o,--out", gen.out, "output CSV")->required();

    FitArgs fit;
    auto* f = app.add_subcommand("fit", "predict on a grid");
    FitArgs plot;
    auto* p = app.add_subcommand("plotdata", "predict on a grid and emit given/estimate points");
    for (auto [cmd, args] : {std::pair{f, &fit}, std::pair{p, &plot}}) {
        cmd->add_option("data", args->data, "input CSV")->required()->check(CLI::ExistingFile);
        cmd->add_option("--response", args->response, "response column name");
        args->kernel.add_to(cmd);
        cmd->add_option("--grid", args->grid, "start:end:count per predictor (inclusive)");
        cmd->add_option("--grid-count", args->default_count, "points per axis when --grid is absent")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--policy", args->policy, "exact-match policy")
            ->check(CLI::IsMember({"return_mean_of_matches", "mean", "error"}));
        cmd->add_option("--threads", args->threads, "worker threads")->check(CLI::PositiveNumber);
    }
    f->add_option("-o,--out", fit.out, "curve CSV (standard output when absent)");
    p->add_option("-o,--out", plot.out, "curve CSV")->required();
    p->add_option("--points", plot.points_out, "points CSV (default <out>.points.csv)");

    TuneArgs tune;
    auto* t = app.add_subcommand("tune", "select kernel parameters");
    t->add_option("data", tune.data, "input CSV")->required()->check(CLI::ExistingFile);
    t->add_option("--response", tune.response, "response column name");
    t->add_option("--mode", tune.mode, "tuning mode")->check(CLI::IsMember({"variance", "iterate", "two-param"}));
    t->add_option("--kernel", tune.family, "kernel family")->check(CLI::IsMember({"exp_base", "exp_base_shifted"}));
    t->add_option("--multidim", tune.mdmode, "multi-dimensional combination")
        ->check(CLI::IsMember({"sum", "product"}));
    t->add_option("--r-min", tune.r_min, "lower bound for r");
    t->add_option("--r-max", tune.r_max, "upper bound for r");
    t->add_option("--ef", tune.ef, "explained fraction (variance mode)");
    t->add_option("--max-rounds", tune.max_rounds, "iteration cap (iterate mode)");
    t->add_option("--damping", tune.damping, "damping factor (iterate mode)");
    t->add_option("--q-min", tune.q_min, "lower bound for q (two-param mode)");
    t->add_option("--q-max", tune.q_max, "upper bound for q (two-param mode)");
    t->add_option("--lambda-var", tune.lambda_var, "variance-match weight (two-param mode)");
    t->add_option("--lambda-fit", tune.lambda_fit, "fit weight (two-param mode)");
    t->add_option("--threads", tune.threads, "worker threads")->check(CLI::PositiveNumber);
    t->add_option("-o,--out", tune.out, "result JSON (standard output when absent)");

    BenchArgs bench;
    auto* b = app.add_subcommand("bench", "run a benchmark config");
    b->add_option("config", bench.config, "benchmark config JSON");
    b->add_option("-o,--out", bench.out, "report JSON");
    b->add_option("--predictions", bench.predictions, "predictions CSV (default <out>.predictions.csv)");
    b->add_option("--print-advantage", bench.advantage, "print (lasso/xaxis - 1) * 100 and exit")
        ->expected(2)
        ->excludes(b->get_option("config"));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (*g) return cmd_gen(gen, *g);
        if (*f) return cmd_fit(fit);
        if (*p) return cmd_plotdata(plot);
        if (*t) return cmd_tune(tune);
        if (*b) return cmd_bench(bench);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitUsage;
}
