#pragma once

// Subcommands of the pntomo tool. Each writes its files, prints a short
// summary to `out` and warnings to `err`. Errors propagate as exceptions:
// ValidationError (including TruncationError) and ConvergenceError.

#include <iosfwd>
#include <string>

#include "pntomo/config.hpp"

namespace pntomo::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitConvergence = 3;

/// Writes the state's density matrix JSON (default "state.json").
void gen_state(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Reads a density matrix, writes the measurement CSV and its sidecar
/// (default "table.csv").
void simulate(const RunConfig& cfg, const std::string& state_path, std::ostream& out, std::ostream& err);

/// Reads a measurement table, writes the reconstruction report JSON
/// (default "report.json").
void reconstruct(const RunConfig& cfg, const std::string& table_path, std::ostream& out, std::ostream& err);

/// Prints fidelity and trace distance of two density-matrix or report files.
/// A smaller matrix is embedded in the larger space before comparing.
void compare(const std::string& path_a, const std::string& path_b, std::ostream& out);

/// Scan CSV (default "scan.csv"). A measurement table (".csv") yields the
/// zero-count distribution at the grid nodes. A density matrix yields
/// W(alpha, s) on the grid (scan "weight", s auto = -1) or chi(xi, s) on the
/// grid nodes (scan "chi", s auto = 0).
void qscan(const RunConfig& cfg, const std::string& input_path, std::ostream& out, std::ostream& err);

}  // namespace pntomo::cli
