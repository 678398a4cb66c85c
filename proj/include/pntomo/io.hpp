#pragma once

// File formats:
//   density matrix   JSON {"dim": d, "re": [[...]], "im": [[...]]}, row-major
//   measurement      CSV  alpha_re,alpha_im,n,p      (exact)
//                         alpha_re,alpha_im,n,count  (sampled)
//                    plus a JSON sidecar {"eta", "zeta_mag", "zeta_phase",
//                    "n_max", "shots", "grid": {"r_max", "n_r", "n_theta"}}
//   report           JSON {"rho_hat", "raw_trace", "hermiticity_defect",
//                    "min_eig_before_clip", "params", "grid", "n_trunc_err"}
//   scans            CSV  alpha_re,alpha_im,value | xi_re,xi_im,chi_re,chi_im

#include <nlohmann/json.hpp>

#include <filesystem>
#include <span>
#include <string>

#include "pntomo/fock.hpp"
#include "pntomo/measurement.hpp"
#include "pntomo/reconstruction.hpp"

namespace pntomo::io {

using nlohmann::json;

/// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

json density_to_json(const DensityMatrix& rho);
/// Accepts a bare density object or a report carrying "rho_hat".
DensityMatrix density_from_json(const json& j);

json grid_to_json(const GridSpec& g);
GridSpec grid_from_json(const json& j);

json report_to_json(const ReconstructionReport& report);

/// The sidecar of "dir/name.csv" is "dir/name.json".
std::filesystem::path sidecar_path(const std::filesystem::path& csv_path);

std::string table_csv(const MeasurementTable& table);
json table_sidecar(const MeasurementTable& table);
MeasurementTable table_from(const std::string& csv_text, const json& sidecar);

std::string weight_scan_csv(std::span<const Complex> nodes, std::span<const double> values);
std::string characteristic_scan_csv(std::span<const Complex> xis, std::span<const Complex> chis);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);
json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const json& j);

DensityMatrix read_density(const std::filesystem::path& path);
void write_density(const std::filesystem::path& path, const DensityMatrix& rho);
/// Writes csv_path and its sidecar.
void write_table(const std::filesystem::path& csv_path, const MeasurementTable& table);
MeasurementTable read_table(const std::filesystem::path& csv_path);

}  // namespace pntomo::io
