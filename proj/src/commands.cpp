#include "pntomo/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <ostream>

#include "pntomo/errors.hpp"
#include "pntomo/io.hpp"
#include "pntomo/measurement.hpp"
#include "pntomo/quasiprob.hpp"
#include "pntomo/reconstruction.hpp"

namespace pntomo::cli {

namespace {

void print_warnings(const std::vector<std::string>& warnings, std::ostream& err) {
  for (const auto& w : warnings) err << "warning: " << w << "\n";
}

/// Rough amplitude scale when only a density matrix is known: sqrt(<n>).
double amplitude_of(const DensityMatrix& rho) {
  double mean_n = 0.0;
  const auto pops = rho.populations();
  for (std::size_t n = 0; n < pops.size(); ++n) mean_n += static_cast<double>(n) * pops[n];
  return std::sqrt(std::max(0.0, mean_n));
}

DensityMatrix embed(const DensityMatrix& rho, int dim) {
  if (rho.dim() == dim) return rho;
  CMatrix m = CMatrix::Zero(dim, dim);
  m.topLeftCorner(rho.dim(), rho.dim()) = rho.matrix();
  return DensityMatrix(std::move(m), rho.leakage());
}

void require_same(const char* what, double table_value, std::optional<double> cfg_value, double tol) {
  if (cfg_value && std::abs(*cfg_value - table_value) > tol) {
    throw ValidationError(std::string(what) + " = " + std::to_string(*cfg_value) +
                          " conflicts with the table's " + std::to_string(table_value));
  }
}

}  // namespace

void gen_state(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  cfg.validate();
  if (!cfg.state) throw ValidationError("gen-state needs a \"state\" entry in the config");
  const auto rho = build_state(*cfg.state, cfg.resolved_dim());
  const std::string path = cfg.out.value_or("state.json");
  io::write_density(path, rho);
  (void)err;
  out << describe(*cfg.state) << " dim " << rho.dim() << " leakage " << rho.leakage() << "\n";
}

void simulate(const RunConfig& cfg, const std::string& state_path, std::ostream& out, std::ostream& err) {
  const auto rho = io::read_density(state_path);
  if (cfg.dim && *cfg.dim != rho.dim()) {
    throw ValidationError("dim " + std::to_string(*cfg.dim) + " conflicts with the state file's dim " +
                          std::to_string(rho.dim()));
  }
  RunConfig local = cfg;
  local.dim = rho.dim();
  local.validate();

  const double amplitude = cfg.state ? max_amplitude(*cfg.state) : amplitude_of(rho);
  const auto grid = make_grid(local.resolved_grid(amplitude));

  TableOptions options;
  options.eta = local.resolved_eta();
  if (local.squeeze && !local.squeeze->is_identity()) options.squeeze = local.squeeze;
  options.n_max = local.resolved_n_max();
  options.shots = local.shots;
  options.seed = local.seed;
  const auto table = build_table(rho, grid, options);

  const std::string path = cfg.out.value_or("table.csv");
  io::write_table(path, table);
  print_warnings(table.warnings, err);
  const double worst_tail = table.tail_mass.empty()
                                ? 0.0
                                : *std::max_element(table.tail_mass.begin(), table.tail_mass.end());
  out << "nodes " << table.alphas.size() << " n_max " << table.n_max << " eta " << table.eta
      << " max_tail " << worst_tail << "\n";
}

void reconstruct(const RunConfig& cfg, const std::string& table_path, std::ostream& out,
                 std::ostream& err) {
  auto table = io::read_table(table_path);

  require_same("eta", table.eta, cfg.eta, 1e-12);
  require_same("delta", table.delta(), cfg.squeeze ? std::optional(cfg.squeeze->delta()) : std::nullopt,
               1e-9);
  require_same("rmax", table.grid.r_max, cfg.r_max, 1e-12);
  if (cfg.n_r && *cfg.n_r != table.grid.n_r) throw ValidationError("nr conflicts with the table's grid");
  if (cfg.n_theta && *cfg.n_theta != table.grid.n_theta) {
    throw ValidationError("ntheta conflicts with the table's grid");
  }

  if (cfg.n_max) {
    if (*cfg.n_max > table.n_max) {
      throw ValidationError("nmax " + std::to_string(*cfg.n_max) + " exceeds the table's n_max " +
                            std::to_string(table.n_max));
    }
    for (auto& p : table.probs) p.resize(*cfg.n_max + 1);
    for (auto& c : table.counts) c.resize(*cfg.n_max + 1);
    table.n_max = *cfg.n_max;
  }

  RunConfig local = cfg;
  local.eta = table.eta;
  local.squeeze = table.squeeze;
  local.n_max = table.n_max;
  local.validate();

  const int dim = local.resolved_dim();
  const double s = local.s ? *local.s : default_s(table.eta, table.delta());
  const KernelParams params{s, table.eta, table.delta()};
  const auto grid = make_grid(table.grid);
  const auto report = pntomo::reconstruct(table, params, grid, dim);

  const std::string path = cfg.out.value_or("report.json");
  io::write_json(path, io::report_to_json(report));
  print_warnings(table.warnings, err);
  print_warnings(report.warnings, err);
  out << "s " << params.s << " raw_trace " << report.raw_trace << " hermiticity_defect "
      << report.hermiticity_defect << " min_eig_before_clip " << report.min_eigenvalue_before_clip << "\n";
}

void compare(const std::string& path_a, const std::string& path_b, std::ostream& out) {
  const auto a = io::read_density(path_a);
  const auto b = io::read_density(path_b);
  const int dim = std::max(a.dim(), b.dim());
  const auto ea = embed(a, dim);
  const auto eb = embed(b, dim);
  out.precision(17);
  out << "fidelity " << fidelity(ea, eb) << "\n";
  out << "trace_distance " << trace_distance(ea, eb) << "\n";
}

void qscan(const RunConfig& cfg, const std::string& input_path, std::ostream& out, std::ostream& err) {
  const std::string path = cfg.out.value_or("scan.csv");

  if (std::filesystem::path(input_path).extension() == ".csv") {
    const auto table = io::read_table(input_path);
    const auto q = q_from_zero_counts(table);
    io::write_text(path, io::weight_scan_csv(q.nodes, q.values));
    print_warnings(table.warnings, err);
    out << q.label << "\n";
    return;
  }

  RunConfig checked = cfg;
  checked.s.reset();  // scans accept any s < 1, not only kernel-admissible ones
  checked.validate();
  const auto rho = io::read_density(input_path);
  const double amplitude = cfg.state ? max_amplitude(*cfg.state) : amplitude_of(rho);
  const auto grid = make_grid(cfg.resolved_grid(amplitude));

  if (cfg.scan == "chi") {
    const double s = cfg.s.value_or(0.0);
    std::vector<Complex> chis;
    chis.reserve(grid.size());
    for (const auto& xi : grid.nodes) chis.push_back(characteristic_function(rho, xi, s));
    io::write_text(path, io::characteristic_scan_csv(grid.nodes, chis));
    out << "chi(xi, s = " << s << ") = Tr{rho D(xi)} e^{s|xi|^2/2}\n";
    return;
  }

  const double s = cfg.s.value_or(-1.0);
  if (!(s < 1.0)) throw ValidationError("weight scans need s < 1");
  std::vector<double> values;
  values.reserve(grid.size());
  double worst_imag = 0.0;
  for (const auto& alpha : grid.nodes) {
    const auto w = weight_function(rho, alpha, s);
    values.push_back(w.value);
    worst_imag = std::max(worst_imag, w.imag_defect);
  }
  io::write_text(path, io::weight_scan_csv(grid.nodes, values));
  if (worst_imag > 1e-10) err << "warning: weight function imaginary defect " << worst_imag << "\n";
  out << "W(alpha, s = " << s << ") = Tr{rho T(alpha, s)}, normalized so int d^2alpha/pi W = 1"
      << " (vacuum W(0, 0) = 2)\n";
}

}  // namespace pntomo::cli
