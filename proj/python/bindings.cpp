#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <string>

#include "pntomo/config.hpp"
#include "pntomo/errors.hpp"
#include "pntomo/io.hpp"
#include "pntomo/quasiprob.hpp"
#include "pntomo/reconstruction.hpp"

namespace py = pybind11;
using namespace pntomo;

namespace {

DensityMatrix as_density(const CMatrix& m) {
  const double leak = std::max(0.0, 1.0 - m.trace().real());
  return DensityMatrix(m, leak);
}

std::optional<SqueezeSpec> as_squeeze(double mag, double phase) {
  if (mag == 0.0) return std::nullopt;
  return SqueezeSpec{mag, phase};
}

py::dict report_dict(const ReconstructionReport& r) {
  py::dict d;
  d["rho_hat"] = r.rho_hat.matrix();
  d["rho_raw"] = r.rho_raw;
  d["raw_trace"] = r.raw_trace;
  d["hermiticity_defect"] = r.hermiticity_defect;
  d["min_eig_before_clip"] = r.min_eigenvalue_before_clip;
  d["clipped_mass"] = r.clipped_mass;
  d["n_trunc_err"] = r.n_truncation_error_estimate;
  d["s"] = r.params.s;
  d["eta"] = r.params.eta;
  d["delta"] = r.params.delta;
  d["warnings"] = r.warnings;
  return d;
}

}  // namespace

PYBIND11_MODULE(_pntomo, m) {
  m.doc() = "Photon-number-resolved phase-space tomography";

  auto validation = py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);
  (void)validation;

  m.def("build_state", [](const std::string& spec_json, int dim) {
    return build_state(state_from_json(nlohmann::json::parse(spec_json)), dim).matrix();
  }, py::arg("spec_json"), py::arg("dim"));
  m.def("describe_state", [](const std::string& spec_json) {
    return describe(state_from_json(nlohmann::json::parse(spec_json)));
  });

  m.def("displacement", [](Complex alpha, int dim) { return displacement_operator(alpha, dim).entries; },
        py::arg("alpha"), py::arg("dim"));
  m.def("squeeze", [](double mag, double phase, int dim) { return squeeze_operator({mag, phase}, dim).entries; },
        py::arg("mag"), py::arg("phase"), py::arg("dim"));
  m.def("t_operator", [](Complex alpha, double s, int dim) { return t_operator(alpha, s, dim).entries; },
        py::arg("alpha"), py::arg("s"), py::arg("dim"));

  m.def("fidelity", [](const CMatrix& a, const CMatrix& b) { return fidelity(as_density(a), as_density(b)); });
  m.def("trace_distance",
        [](const CMatrix& a, const CMatrix& b) { return trace_distance(as_density(a), as_density(b)); });

  m.def("grid", [](double r_max, int n_r, int n_theta) {
    const auto g = make_grid(r_max, n_r, n_theta);
    return py::make_tuple(g.nodes, g.weights);
  }, py::arg("r_max"), py::arg("n_r"), py::arg("n_theta"));

  m.def("displaced_number_probabilities", [](const CMatrix& rho, Complex alpha, int n_max) {
    return displaced_number_probabilities(as_density(rho), alpha, n_max).p;
  });
  m.def("apply_efficiency", [](const std::vector<double>& p, double eta) { return apply_efficiency(p, eta); });
  m.def("invert_efficiency", [](const std::vector<double>& p, double eta, int n_max) {
    return invert_efficiency(p, eta, n_max).p;
  });

  m.def("admissible_s_range", [](double eta, double delta) -> std::optional<std::pair<double, double>> {
    const auto r = admissible_s_range(eta, delta);
    if (!r) return std::nullopt;
    return std::pair{r->lower, r->upper};
  }, py::arg("eta"), py::arg("delta") = 1.0);
  m.def("effective_efficiency", &effective_efficiency, py::arg("eta"), py::arg("delta"));
  m.def("default_s", &default_s, py::arg("eta"), py::arg("delta") = 1.0);

  py::class_<MeasurementTable>(m, "Table")
      .def_readonly("alphas", &MeasurementTable::alphas)
      .def_readonly("probs", &MeasurementTable::probs)
      .def_readonly("tail_mass", &MeasurementTable::tail_mass)
      .def_readonly("eta", &MeasurementTable::eta)
      .def_readonly("n_max", &MeasurementTable::n_max)
      .def_readonly("warnings", &MeasurementTable::warnings)
      .def_property_readonly("sampled", &MeasurementTable::sampled)
      .def_property_readonly("delta", &MeasurementTable::delta)
      .def_property_readonly("grid",
                             [](const MeasurementTable& t) {
                               return py::make_tuple(t.grid.r_max, t.grid.n_r, t.grid.n_theta);
                             })
      .def("save", [](const MeasurementTable& t, const std::string& path) { io::write_table(path, t); })
      .def_static("load", [](const std::string& path) { return io::read_table(path); });

  m.def("simulate",
        [](const CMatrix& rho, double r_max, int n_r, int n_theta, double eta, double squeeze_mag,
           double squeeze_phase, std::optional<int> n_max, std::optional<std::uint64_t> shots, std::uint64_t seed) {
          const auto state = as_density(rho);
          const auto grid = make_grid(r_max, n_r, n_theta);
          TableOptions opt{eta, as_squeeze(squeeze_mag, squeeze_phase), n_max.value_or(state.dim() - 1), shots,
                           seed};
          return build_table(state, grid, opt);
        },
        py::arg("rho"), py::arg("r_max"), py::arg("n_r") = 48, py::arg("n_theta") = 64, py::arg("eta") = 1.0,
        py::arg("squeeze_mag") = 0.0, py::arg("squeeze_phase") = 0.0, py::arg("n_max") = py::none(),
        py::arg("shots") = py::none(), py::arg("seed") = 0);

  m.def("reconstruct",
        [](const MeasurementTable& table, int dim, std::optional<double> s) {
          const double delta = table.delta();
          const KernelParams p{s.value_or(default_s(table.eta, delta)), table.eta, delta};
          return report_dict(reconstruct(table, p, make_grid(table.grid), dim));
        },
        py::arg("table"), py::arg("dim"), py::arg("s") = py::none());

  m.def("q_from_zero_counts", [](const MeasurementTable& table) {
    const auto q = q_from_zero_counts(table);
    return py::make_tuple(q.nodes, q.values, q.label);
  });
  m.def("weight_function", [](const CMatrix& rho, Complex alpha, double s) {
    return weight_function(as_density(rho), alpha, s).value;
  }, py::arg("rho"), py::arg("alpha"), py::arg("s"));
  m.def("characteristic_function", [](const CMatrix& rho, Complex xi, double s) {
    return characteristic_function(as_density(rho), xi, s);
  }, py::arg("rho"), py::arg("xi"), py::arg("s"));

  m.def("read_density", [](const std::string& path) { return io::read_density(path).matrix(); });
  m.def("write_density", [](const std::string& path, const CMatrix& rho) { io::write_density(path, as_density(rho)); });
}
