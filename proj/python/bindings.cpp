#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "i3322/ascent.hpp"
#include "i3322/bounds.hpp"
#include "i3322/soscheck.hpp"

namespace py = pybind11;
using namespace i3322;

namespace {

Branch branch_arg(const std::string& name) {
  const auto b = parse_branch(name);
  if (!b) throw py::value_error("unknown branch: " + name);
  return *b;
}

py::dict strategy_dict(const Strategy& s) {
  py::dict d;
  d["dim"] = s.dim();
  d["schmidt"] = s.schmidt();
  py::list a, b;
  for (int k = 0; k < 3; ++k) {
    a.append(Matrix(s.alice()[k].matrix()));
    b.append(Matrix(s.bob()[k].matrix()));
  }
  d["A"] = a;
  d["B"] = b;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "I3322 strategies, normal forms, bound oracles and SOS certificates";

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);

  m.def("classical_max", [] {
    const ClassicalResult r = classical_max();
    return py::make_tuple(r.max, r.maximizers, r.evaluated);
  }, "(max, maximizers, evaluated) over the 64 deterministic assignments");

  m.def("f_value", &f_value, py::arg("x"), py::arg("y"));

  m.def("normal_form_value", [](const std::string& branch, std::vector<double> coeffs) {
    const NormalFormSpec spec = NormalFormSpec::make(branch_arg(branch), std::move(coeffs));
    return i3322_value(build_normal_form(spec)).value;
  }, py::arg("branch"), py::arg("coeffs"), "Direct value of a joint normal form");

  m.def("omega_closed", [](const std::string& branch, std::vector<double> coeffs) {
    return omega_closed(NormalFormSpec::make(branch_arg(branch), std::move(coeffs)));
  }, py::arg("branch"), py::arg("coeffs"));

  m.def("normal_form", [](const std::string& branch, std::vector<double> coeffs) {
    return strategy_dict(build_normal_form(NormalFormSpec::make(branch_arg(branch), std::move(coeffs))));
  }, py::arg("branch"), py::arg("coeffs"), "Operators and weights as numpy arrays");

  m.def("strategy_value", [](const Vector& schmidt, const std::array<Matrix, 6>& ops) {
    return i3322_value(Strategy::from_matrices(schmidt, ops)).value;
  }, py::arg("schmidt"), py::arg("ops"), "Value for A1, A2, A3, B1, B2, B3");

  m.def("optimize_omega", [](const std::string& branch, int dim, double step) {
    OmegaSearch s;
    s.step = step;
    const OmegaResult r = optimize_omega(branch_arg(branch), dim, s);
    return py::make_tuple(r.value, r.spec.coeffs);
  }, py::arg("branch"), py::arg("dim"), py::arg("step") = 0.05, "(value, coeffs)");

  m.def("seesaw_restarts", [](int dim, int restarts, std::uint64_t seed) {
    py::gil_scoped_release release;
    const RestartRun r = seesaw_restarts(dim, restarts, seed);
    double worst = 0.0;
    for (const auto& t : r.traces) worst = std::min(worst, t.worst_step());
    py::gil_scoped_acquire acquire;
    py::dict d;
    d["values"] = r.values;
    d["best_index"] = r.best_index;
    d["worst_step"] = worst;
    return d;
  }, py::arg("dim"), py::arg("restarts") = 10, py::arg("seed") = 0);

  m.def("run_claim", [](const std::string& claim, double step) {
    const BoundReport r = run_claim(claim, step > 0 ? step : default_step(claim));
    py::dict d;
    d["claim"] = r.claim;
    d["bound"] = r.bound;
    d["grid_max"] = r.grid_max;
    d["certified_max"] = r.certified_max;
    d["argmax"] = r.argmax;
    d["verdict"] = std::string(to_string(r.verdict));
    d["holds"] = r.holds();
    return d;
  }, py::arg("claim"), py::arg("step") = 0.0);

  m.def("verify_builtin", [](const std::string& id, double bound, int samples, std::uint64_t seed) {
    Certificate c = builtin_certificate(id);
    if (!std::isnan(bound)) c = c.with_bound(bound);
    const Verdict v = verify(c, samples, seed);
    py::dict d;
    d["accepted"] = v.accepted;
    d["psd_margin"] = v.psd_margin;
    d["schur_margin"] = v.schur_margin;
    d["identity_residual"] = v.identity_residual;
    d["gram"] = Matrix(v.gram.matrix());
    return d;
  }, py::arg("id") = "i3322-case3", py::arg("bound") = std::numeric_limits<double>::quiet_NaN(),
     py::arg("samples") = 10000, py::arg("seed") = 0);
}
