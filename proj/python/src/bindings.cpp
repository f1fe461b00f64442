#include <string>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fal/alm_solver.hpp"
#include "fal/problems.hpp"
#include "fal/prox.hpp"
#include "run_config.hpp"

namespace py = pybind11;
using fal::run::json;

namespace {

// Configs and reports cross the boundary as JSON text; the Python side
// handles dict conversion with the json module.
py::tuple solve_json(const std::string& config, bool include_timing) {
  const fal::run::RunConfig cfg = fal::run::parse_config(json::parse(config));
  fal::run::RunResult r;
  {
    py::gil_scoped_release release;
    r = fal::run::execute(cfg, include_timing);
  }
  return py::make_tuple(r.exit_code, r.report.dump(), r.trace_csv, r.plot_csv);
}

std::string bounds_json(const std::string& config) {
  return fal::run::bounds_report(fal::run::parse_config(json::parse(config))).dump();
}

}  // namespace

PYBIND11_MODULE(_pyfal, m) {
  m.doc() = "Bindings for the fal constrained minimax solvers";

  // Translators are tried newest first, so register bases before subclasses.
  auto error = py::register_exception<fal::Error>(m, "Error", PyExc_RuntimeError);
  auto invalid = py::register_exception<fal::InvalidParameter>(m, "InvalidParameter", error.ptr());
  py::register_exception<fal::run::ConfigError>(m, "ConfigError", invalid.ptr());

  m.def("solve_json", &solve_json, py::arg("config"), py::arg("include_timing") = true,
        "Run a config given as JSON text. Returns (exit_code, report_json, trace_csv, plot_csv).");
  m.def("bounds_json", &bounds_json, py::arg("config"));

  m.def("list_instances", [] {
    py::list out;
    for (const auto& info : fal::list_instances()) {
      py::dict d;
      d["name"] = info.name;
      d["description"] = info.description;
      d["parameters"] = info.parameters;
      out.append(d);
    }
    return out;
  });

  m.def("alm_iteration_count", &fal::alm_iteration_count, py::arg("eps"), py::arg("eps0"),
        py::arg("tau"));
  m.def("positive_part", &fal::positive_part, py::arg("v"));
  m.def("project_nonneg_ball", &fal::project_nonneg_ball, py::arg("v"), py::arg("radius"));
}
