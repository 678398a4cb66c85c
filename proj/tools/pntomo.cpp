// pntomo: photon-number tomography from the command line.
//
//   pntomo gen-state   --config run.json --out state.json
//   pntomo simulate    state.json --config run.json --out table.csv
//   pntomo reconstruct table.csv --s auto --dim 20 --out report.json
//   pntomo compare     state.json report.json
//   pntomo qscan       state.json|table.csv --out scan.csv

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <utility>

#include "pntomo/commands.hpp"
#include "pntomo/config.hpp"
#include "pntomo/errors.hpp"

namespace {

struct Overrides {
  std::string config_path;
  std::map<std::string, std::string> values;
};

void add_run_flags(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config_path, "JSON run configuration");
  static const std::pair<const char*, const char*> flags[] = {
      {"out", "output path"},
      {"seed", "RNG seed for sampled counts"},
      {"dim", "Fock cutoff"},
      {"eta", "detector efficiency in (0, 1]"},
      {"s", "ordering parameter, or 'auto'"},
      {"squeeze-mag", "pre-squeeze magnitude |zeta|"},
      {"squeeze-phase", "pre-squeeze phase in [0, 2 pi)"},
      {"rmax", "grid radius"},
      {"nr", "radial nodes"},
      {"ntheta", "angular nodes"},
      {"nmax", "largest photon count kept"},
      {"shots", "shots per node, or 'exact'"},
      {"scan", "qscan kind: weight or chi"},
  };
  for (const auto& [key, help] : flags) {
    auto* opt = cmd->add_option_function<std::string>(
        std::string("--") + key, [&o, key = key](const std::string& v) { o.values[key] = v; }, help);
    opt->type_name("VALUE");
  }
}

pntomo::RunConfig resolve(const Overrides& o) {
  pntomo::RunConfig cfg = o.config_path.empty() ? pntomo::RunConfig{} : pntomo::load_config(o.config_path);
  for (const auto& [key, value] : o.values) pntomo::apply_override(cfg, key, value);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Photon-number tomography: simulate displaced photon counting and reconstruct density matrices"};
  app.require_subcommand(1);

  Overrides o;
  std::string input;
  std::string input_b;

  auto* gen = app.add_subcommand("gen-state", "Write the density matrix of a configured state");
  add_run_flags(gen, o);

  auto* sim = app.add_subcommand("simulate", "Simulate a measurement table from a density matrix");
  sim->add_option("state", input, "density matrix JSON")->required();
  add_run_flags(sim, o);

  auto* rec = app.add_subcommand("reconstruct", "Reconstruct a density matrix from a measurement table");
  rec->add_option("table", input, "measurement CSV (sidecar JSON next to it)")->required();
  add_run_flags(rec, o);

  auto* cmp = app.add_subcommand("compare", "Fidelity and trace distance of two density matrices");
  cmp->add_option("a", input, "density matrix or report JSON")->required();
  cmp->add_option("b", input_b, "density matrix or report JSON")->required();

  auto* scan = app.add_subcommand("qscan", "Weight-function, characteristic or zero-count scans");
  scan->add_option("input", input, "density matrix JSON or measurement CSV")->required();
  add_run_flags(scan, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : pntomo::cli::kExitValidation;
  }

  try {
    if (*cmp) {
      pntomo::cli::compare(input, input_b, std::cout);
      return pntomo::cli::kExitOk;
    }
    const auto cfg = resolve(o);
    if (*gen) pntomo::cli::gen_state(cfg, std::cout, std::cerr);
    if (*sim) pntomo::cli::simulate(cfg, input, std::cout, std::cerr);
    if (*rec) pntomo::cli::reconstruct(cfg, input, std::cout, std::cerr);
    if (*scan) pntomo::cli::qscan(cfg, input, std::cout, std::cerr);
  } catch (const pntomo::ConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return pntomo::cli::kExitConvergence;
  } catch (const pntomo::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return pntomo::cli::kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return pntomo::cli::kExitValidation;
  }
  return pntomo::cli::kExitOk;
}
