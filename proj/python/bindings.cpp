#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "reap/errors.hpp"
#include "reap/numerics.hpp"
#include "reap/pipeline.hpp"
#include "reap/qpform.hpp"
#include "reap/solver.hpp"

namespace py = pybind11;
using namespace reap;

namespace {

// Validates a configuration; raises ValueError with the diagnostic on failure.
Controller controller_for(const RunConfig& cfg) {
  ValidationReport rep = validate(cfg);
  if (!rep.ok()) throw py::value_error(rep.message);
  return *rep.controller;
}

py::dict trace_dict(const SimTrace& trace) {
  const int T = static_cast<int>(trace.records.size());
  const auto& first = trace.records.front();
  Matrix x(T, first.x.size()), u(T, first.u.size()), y(T, first.y.size());
  Vector sigma(T), cost(T);
  std::vector<long> iterations;
  std::vector<bool> accepted;
  for (int k = 0; k < T; ++k) {
    const auto& r = trace.records[k];
    x.row(k) = r.x.transpose();
    u.row(k) = r.u.transpose();
    y.row(k) = r.y.transpose();
    sigma(k) = r.sigma;
    cost(k) = r.cost;
    iterations.push_back(r.iterations);
    accepted.push_back(r.accepted);
  }
  py::dict d;
  d["x"] = x;
  d["u"] = u;
  d["y"] = y;
  d["sigma"] = sigma;
  d["cost"] = cost;
  d["iterations"] = iterations;
  d["accepted"] = accepted;
  d["warm_start_fallbacks"] = trace.warm_start_fallbacks;
  d["csv"] = trace_csv(trace);
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Anytime-feasible MPC solver bindings";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError",
                                         PyExc_ArithmeticError);
  py::register_exception<SimulationError>(m, "SimulationError",
                                          PyExc_RuntimeError);

  py::class_<RunConfig>(m, "RunConfig")
      .def_readwrite("horizon", &RunConfig::horizon)
      .def_readwrite("steps", &RunConfig::steps)
      .def_readwrite("x0", &RunConfig::x0)
      .def_property(
          "budget", [](const RunConfig& c) { return c.budget.iterations; },
          [](RunConfig& c, long b) {
            c.budget.iterations = b;
            c.budget.deadline_ms.reset();
          })
      .def_property(
          "method",
          [](const RunConfig& c) -> std::optional<std::string> {
            if (!c.method) return std::nullopt;
            return std::string(to_string(*c.method));
          },
          [](RunConfig& c, const std::string& name) {
            c.method = parse_method(name);
          });

  m.def("load_config", &load_config, py::arg("path"));
  m.def("parse_config", &parse_config, py::arg("text"),
        py::arg("origin") = "<string>");

  m.def(
      "check",
      [](const RunConfig& cfg) {
        const ValidationReport rep = validate(cfg);
        return py::make_tuple(rep.exit_code, rep.message);
      },
      py::arg("config"),
      "Returns (exit_code, message) for the validation pipeline.");

  m.def(
      "simulate",
      [](const RunConfig& cfg) {
        const Controller c = controller_for(cfg);
        SimConfig s;
        s.steps = cfg.steps;
        s.budget = cfg.budget;
        s.x0 = cfg.x0;
        py::gil_scoped_release release;
        SimTrace trace = run_closed_loop(c, s);
        py::gil_scoped_acquire acquire;
        return trace_dict(trace);
      },
      py::arg("config"));

  m.def(
      "solve_qp",
      [](const Matrix& H, const Vector& f, const Matrix& G, const Vector& b,
         long iterations) {
        const QpProblem qp = QpProblem::dense(H, f, G, b);
        ReapIterate it = initialize_at_k0(qp);
        for (long k = 0; k < iterations; ++k) it = flow_step(it, qp);
        return py::make_tuple(it.u_hat, it.lam_hat);
      },
      py::arg("H"), py::arg("f"), py::arg("G"), py::arg("b"),
      py::arg("iterations") = 1000,
      "Runs the primal-dual flow on min 0.5 u'Hu + f'u s.t. Gu <= b.");

  m.def("solve_dare", &solve_dare, py::arg("A"), py::arg("B"), py::arg("Qx"),
        py::arg("Qu"));
}
