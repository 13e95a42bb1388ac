#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "xreg/bench.hpp"
#include "xreg/dataset.hpp"
#include "xreg/distance_solver.hpp"
#include "xreg/error.hpp"
#include "xreg/estimator.hpp"
#include "xreg/kernels.hpp"
#include "xreg/lasso.hpp"
#include "xreg/serialization.hpp"
#include "xreg/tuning.hpp"

namespace py = pybind11;
using namespace xreg;

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

namespace {

// Accepts shape (n,) for b = 1 or (n, b).
std::pair<std::size_t, std::vector<double>> rows_of(const Array& a) {
    if (a.ndim() == 1) return {1, std::vector<double>(a.data(), a.data() + a.size())};
    if (a.ndim() == 2) return {static_cast<std::size_t>(a.shape(1)), std::vector<double>(a.data(), a.data() + a.size())};
    throw ValidationError("expected a 1-d or 2-d array of predictors");
}

std::vector<std::vector<double>> points_of(const Array& a) {
    const auto [b, flat] = rows_of(a);
    std::vector<std::vector<double>> out(b == 0 ? 0 : flat.size() / b);
    for (std::size_t i = 0; i < out.size(); ++i) out[i].assign(flat.begin() + i * b, flat.begin() + (i + 1) * b);
    return out;
}

Array to_array(const std::vector<double>& v) {
    Array out(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

KernelSpec checked(KernelSpec k) {
    k.validate();
    return k;
}

Dataset make_dataset(const Array& x, const Array& y) {
    auto [b, flat] = rows_of(x);
    return Dataset(b, std::move(flat), std::vector<double>(y.data(), y.data() + y.size()));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "xreg native core";

    auto base = py::register_exception<Error>(m, "XregError", PyExc_RuntimeError);
    py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
    py::register_exception<DataError>(m, "DataError", base.ptr());
    py::register_exception<SingularityError>(m, "SingularityError", base.ptr());
    py::register_exception<DegenerateError>(m, "DegenerateError", base.ptr());

    py::class_<Dataset>(m, "Dataset")
        .def(py::init(&make_dataset), py::arg("x"), py::arg("y"))
        .def_property_readonly("dimension", &Dataset::dimension)
        .def_property_readonly("x",
                               [](const Dataset& d) {
                                   Array out({static_cast<py::ssize_t>(d.size()),
                                              static_cast<py::ssize_t>(d.dimension())});
                                   std::copy(d.predictors().begin(), d.predictors().end(), out.mutable_data());
                                   return out;
                               })
        .def_property_readonly("y",
                               [](const Dataset& d) {
                                   return to_array({d.responses().begin(), d.responses().end()});
                               })
        .def_property_readonly("predictor_names", &Dataset::predictor_names)
        .def_property_readonly("response_name", &Dataset::response_name)
        .def("to_csv", [](const Dataset& d) { return to_csv(d); })
        .def("__len__", &Dataset::size)
        .def("__eq__", [](const Dataset& a, const Dataset& b) { return a == b; });

    m.def("load_csv", [](const std::string& path, const std::string& response) { return load_csv(path, response); },
          py::arg("path"), py::arg("response") = "y");
    m.def("parse_csv", [](const std::string& text, const std::string& response) { return parse_csv(text, response); },
          py::arg("text"), py::arg("response") = "y");
    m.def("gen_synthetic",
          [](const std::string& spec_json) {
              return gen_synthetic(parse_json(spec_json, "synthetic spec").get<SynthSpec>());
          },
          py::arg("spec_json"), "Dataset from a SynthSpec JSON document.");

    py::class_<KernelSpec>(m, "KernelSpec")
        .def_static("exp_base",
                    [](double r, const std::string& mode) {
                        return checked(KernelSpec::exp_base(r, multidim_mode_from_string(mode)));
                    },
                    py::arg("r"), py::arg("mode") = "sum")
        .def_static("exp_base_shifted",
                    [](double r, double q, const std::string& mode) {
                        return checked(KernelSpec::exp_base_shifted(r, q, multidim_mode_from_string(mode)));
                    },
                    py::arg("r"), py::arg("q"), py::arg("mode") = "sum")
        .def_static("inverse_power",
                    [](double p, const std::string& mode) {
                        return checked(KernelSpec::inverse_power(p, multidim_mode_from_string(mode)));
                    },
                    py::arg("p") = 2.0, py::arg("mode") = "sum")
        .def_static("inverse_power_shifted",
                    [](double p, double k, const std::string& mode) {
                        return checked(KernelSpec::inverse_power_shifted(p, k, multidim_mode_from_string(mode)));
                    },
                    py::arg("p"), py::arg("k"), py::arg("mode") = "sum")
        .def_static("uniform", &KernelSpec::uniform)
        .def_static("from_json",
                    [](const std::string& text) { return parse_json(text, "kernel").get<KernelSpec>(); })
        .def("to_json", [](const KernelSpec& k) { return json(k).dump(); })
        .def_property_readonly("family", [](const KernelSpec& k) { return to_string(k.family); })
        .def_readonly("base", &KernelSpec::base)
        .def_readonly("power", &KernelSpec::power)
        .def_readonly("shift", &KernelSpec::shift)
        .def("weight", [](const KernelSpec& k, const Array& delta) { return weight(k, rows_of(delta).second); })
        .def("__eq__", [](const KernelSpec& a, const KernelSpec& b) { return a == b; })
        .def("__repr__", [](const KernelSpec& k) { return describe(k); });

    m.def("predict",
          [](const Array& points, const Dataset& ds, const KernelSpec& k, const std::string& policy,
             unsigned threads) {
              auto grid = points_of(points);
              const auto p = exact_match_policy_from_string(policy);
              PredictionCurve c;
              {
                  py::gil_scoped_release release;
                  c = predict_grid(std::move(grid), ds, k, p, threads);
              }
              return to_array(c.values);
          },
          py::arg("points"), py::arg("dataset"), py::arg("kernel"), py::arg("policy") = "return_mean_of_matches",
          py::arg("threads") = 1);
    m.def("predict_loo",
          [](const Dataset& ds, const KernelSpec& k, const std::string& policy, unsigned threads) {
              const auto p = exact_match_policy_from_string(policy);
              std::vector<double> e;
              {
                  py::gil_scoped_release release;
                  e = predict_loo(ds, k, p, threads);
              }
              return to_array(e);
          },
          py::arg("dataset"), py::arg("kernel"), py::arg("policy") = "return_mean_of_matches",
          py::arg("threads") = 1);

    m.def("solve_fixed_point",
          [](const Array& x, const Dataset& ds, double tol, std::size_t max_iter) {
              return json(solve_fixed_point(rows_of(x).second, ds, tol, max_iter)).dump();
          },
          py::arg("x"), py::arg("dataset"), py::arg("tol") = 1e-10, py::arg("max_iter") = 10000,
          "SolveResult JSON for the Euclidean-distance fit at x.");

    m.def("tune",
          [](const Dataset& ds, const std::string& mode, const KernelSpec& family, double r_min, double r_max,
             double ef, std::size_t max_rounds, double damping, double q_min, double q_max, double lambda_var,
             double lambda_fit, unsigned threads) {
              const RBounds bounds{r_min, r_max};
              TuningResult res;
              py::gil_scoped_release release;
              if (mode == "variance") {
                  res = tune_r(ds, family, bounds, ef, threads);
              } else if (mode == "iterate") {
                  res = iterate_randomness(ds, family, max_rounds, damping, bounds, threads);
              } else if (mode == "two-param" || mode == "two_param") {
                  res = tune_two_param(ds, {bounds, q_min, q_max, lambda_var, lambda_fit, threads},
                                       family.multidim_mode);
              } else {
                  throw ValidationError("unknown tuning mode \"" + mode + "\" (expected variance, iterate, two-param)");
              }
              py::gil_scoped_acquire acquire;
              return json(res).dump();
          },
          py::arg("dataset"), py::arg("mode") = "iterate", py::arg("family") = KernelSpec::exp_base(2.0),
          py::arg("r_min") = RBounds{}.lo, py::arg("r_max") = RBounds{}.hi, py::arg("ef") = 1.0,
          py::arg("max_rounds") = 20, py::arg("damping") = 0.5, py::arg("q_min") = 0.0, py::arg("q_max") = 100.0,
          py::arg("lambda_var") = 0.7, py::arg("lambda_fit") = 0.3, py::arg("threads") = 1,
          "TuningResult JSON.");

    m.def("noise_share",
          [](const Array& e, const Array& y) {
              return noise_share(rows_of(e).second, rows_of(y).second).share;
          },
          py::arg("e"), py::arg("y"));

    py::class_<LassoModel>(m, "LassoModel")
        .def_readonly("degree", &LassoModel::degree)
        .def_readonly("lam", &LassoModel::lambda)
        .def_readonly("coefficients", &LassoModel::coefficients)
        .def_readonly("converged", &LassoModel::converged)
        .def("predict",
             [](const LassoModel& model, const Array& x) {
                 std::vector<double> out;
                 for (double v : rows_of(x).second) out.push_back(predict_lasso(model, v));
                 return to_array(out);
             })
        .def("to_json", [](const LassoModel& model) { return json(model).dump(); });
    m.def("fit_lasso",
          [](const Dataset& ds, std::size_t degree, double lam) {
              py::gil_scoped_release release;
              return fit_lasso(ds, degree, lam);
          },
          py::arg("dataset"), py::arg("degree"), py::arg("lam"));

    m.def("run_benchmark",
          [](const std::string& config_json) {
              const BenchConfig cfg = parse_json(config_json, "bench config").get<BenchConfig>();
              BenchmarkReport report;
              {
                  py::gil_scoped_release release;
                  report = run_benchmark(cfg);
              }
              return report_to_json(report, "").dump();
          },
          py::arg("config_json"), "Benchmark report JSON.");
    m.def("percent_advantage", &percent_advantage, py::arg("err_base"), py::arg("err_new"));
}
