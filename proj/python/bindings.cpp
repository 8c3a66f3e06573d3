#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "shapeinv/cli.hpp"
#include "shapeinv/errors.hpp"
#include "shapeinv/models.hpp"
#include "shapeinv/shape1d.hpp"
#include "shapeinv/spectral.hpp"
#include "shapeinv/susy.hpp"
#include "shapeinv/verify.hpp"

namespace py = pybind11;
using namespace shapeinv;

namespace {

py::object to_python(const nlohmann::json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

NBodyModel model_from(const std::string& kind, int n, double alpha, std::optional<double> omega) {
  return make_nbody_model(kind_from_string(kind), n, alpha, omega);
}

Prepotential1D family_from(const std::string& family, const std::vector<double>& params) {
  return Prepotential1D(family_from_string(family), params);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Shape-invariance checks for Calogero-type models";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);

  py::class_<NBodyModel>(m, "Model")
      .def(py::init(&model_from), py::arg("kind"), py::arg("n"), py::arg("alpha"), py::arg("omega") = std::nullopt)
      .def_property_readonly("n", &NBodyModel::n)
      .def_property_readonly("alpha", &NBodyModel::alpha)
      .def_property_readonly("beta", &NBodyModel::beta)
      .def_property_readonly("g", &NBodyModel::g)
      .def("c", &NBodyModel::c)
      .def("remainder", &NBodyModel::remainder)
      .def("prepotential",
           [](const NBodyModel& self, const std::vector<double>& x) {
             const Eigen::VectorXd w = self.prepotential(x);
             return std::vector<double>(w.data(), w.data() + w.size());
           })
      .def("potential", [](const NBodyModel& self, const std::vector<double>& x) { return self.potential(x); })
      .def("jastrow_log", [](const NBodyModel& self, const std::vector<double>& x) { return self.jastrow_log(x); })
      .def("__repr__", &NBodyModel::describe);

  m.def(
      "verify",
      [](const NBodyModel& model, int trials, std::uint64_t seed) {
        VerifyOptions vo;
        vo.trials = trials;
        vo.seed = seed;
        py::list out;
        for (const auto& r : run_verify_suite(model, vo)) out.append(to_python(to_json(r)));
        return out;
      },
      py::arg("model"), py::arg("trials") = 100, py::arg("seed") = 0);

  m.def(
      "constant_fit",
      [](const NBodyModel& model, std::uint64_t seed) {
        VerifyOptions vo;
        vo.seed = seed;
        return to_python(to_json(constant_fit_diagnostic(model, vo)));
      },
      py::arg("model"), py::arg("seed") = 0);

  m.def(
      "algebraic_spectrum",
      [](const std::string& family, const std::vector<double>& params, int n_max) {
        return algebraic_spectrum(family_from(family, params), n_max).energies;
      },
      py::arg("family"), py::arg("params"), py::arg("n_max"));

  m.def(
      "grid_spectrum_1d",
      [](const std::string& family, const std::vector<double>& params, double lo, double hi, int m, int k) {
        const auto h = discretize(family_from(family, params), interval_grid(lo, hi, m), Form1D::potential);
        return eigen(h, k).values;
      },
      py::arg("family"), py::arg("params"), py::arg("lo"), py::arg("hi"), py::arg("m"), py::arg("k"));

  m.def(
      "reduced_spectrum",
      [](const NBodyModel& model, int k, int m) {
        const ReductionCheck c = reduction_spectrum_check(two_body_reduction(model, k), m, k);
        return py::dict(py::arg("algebraic") = c.algebraic, py::arg("grid") = c.grid,
                        py::arg("max_relative") = c.max_relative, py::arg("pass") = c.pass);
      },
      py::arg("model"), py::arg("k") = 4, py::arg("m") = 2000);

  m.def("partner_grid_energy", [](const NBodyModel& model, int m) { return partner_grid_energy(model, m); },
        py::arg("model"), py::arg("m") = 2000);

  m.def(
      "susy",
      [](const NBodyModel& model, const std::string& variant, int m, int cm_modes) {
        SusyGrid g;
        g.m = m;
        g.cm_modes = cm_modes;
        const SusySystem sys = build_susy(model, g, variant_from_string(variant));
        const SusySpectra sp = sector_spectra(sys);
        return to_python(to_json(analyze(sys, sp), sys));
      },
      py::arg("model"), py::arg("variant") = "s1", py::arg("m") = 64, py::arg("cm_modes") = 8);

  m.def(
      "run_cli",
      [](std::vector<std::string> args) {
        args.insert(args.begin(), "shapeinv");
        std::vector<const char*> argv;
        for (const auto& a : args) argv.push_back(a.c_str());
        std::ostringstream out, err;
        const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"));
}
