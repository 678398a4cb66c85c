#pragma once

// Run configuration for the command-line front end. A config is one JSON
// object; command-line flags override its fields. Keys mirror the flag names:
//
//   {"state": {"type": "coherent", "beta": [1.0, 0.5]},
//    "dim": 20, "eta": 0.7, "s": "auto", "squeeze_mag": 0.55, "squeeze_phase": 0,
//    "rmax": 4.5, "nr": 48, "ntheta": 64, "nmax": 15, "shots": "exact",
//    "seed": 1, "out": "table.csv"}
//
// "grid": {"r_max", "n_r", "n_theta"} is accepted in place of rmax/nr/ntheta.

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <string>

#include "pntomo/fock.hpp"
#include "pntomo/grid.hpp"

namespace pntomo {

/// State specs as JSON:
///   {"type": "vacuum"}
///   {"type": "fock", "n": 2}
///   {"type": "coherent", "beta": [re, im]}     (a bare number is real beta)
///   {"type": "thermal", "nbar": 0.5}
///   {"type": "cat", "beta": [re, im], "parity": "even" | "odd"}  or "phase": x
///   {"type": "squeezed_vacuum", "mag": r, "phase": phi}
StateSpec state_from_json(const nlohmann::json& j);
nlohmann::json state_to_json(const StateSpec& spec);

/// Unset optionals take context-dependent defaults (see the resolve_* helpers).
struct RunConfig {
  std::optional<StateSpec> state;
  std::optional<int> dim;
  std::optional<double> eta;
  std::optional<double> s;  ///< nullopt means "auto"
  std::optional<SqueezeSpec> squeeze;
  std::optional<double> r_max;
  std::optional<int> n_r;
  std::optional<int> n_theta;
  std::optional<int> n_max;
  std::optional<std::uint64_t> shots;  ///< nullopt means exact probabilities
  std::uint64_t seed = 0;
  std::optional<std::string> out;
  std::string scan = "weight";

  static constexpr int kDefaultDim = 20;
  static constexpr double kRadiusMargin = 4.0;

  int resolved_dim() const { return dim.value_or(kDefaultDim); }
  int resolved_n_max() const { return n_max.value_or(resolved_dim() - 1); }
  double resolved_eta() const { return eta.value_or(1.0); }
  double delta() const { return squeeze ? squeeze->delta() : 1.0; }
  /// r_max defaults to 4 + the largest amplitude in the state.
  GridSpec resolved_grid(double amplitude) const;

  /// Single-field range checks plus n_max < dim and, when s is set,
  /// admissibility of s for (eta, Delta).
  void validate() const;
};

RunConfig config_from_json(const nlohmann::json& j);
RunConfig load_config(const std::string& path);

/// Applies one flag value, e.g. ("eta", "0.7"), ("s", "auto"), ("shots", "exact").
/// Throws ValidationError on unknown keys or unparsable values.
void apply_override(RunConfig& cfg, const std::string& key, const std::string& value);

}  // namespace pntomo
