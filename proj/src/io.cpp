#include "pntomo/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "pntomo/errors.hpp"

namespace pntomo::io {

namespace {

double parse_double(const std::string& field) {
  double v = 0.0;
  const auto* first = field.data();
  const auto* last = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) throw ValidationError("malformed number '" + field + "'");
  return v;
}

std::uint64_t parse_uint(const std::string& field) {
  std::uint64_t v = 0;
  const auto* last = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), last, v);
  if (ec != std::errc() || ptr != last) throw ValidationError("malformed count '" + field + "'");
  return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, ',')) out.push_back(field);
  return out;
}

}  // namespace

std::string format_double(double v) {
  if (!std::isfinite(v)) throw ValidationError("cannot serialize a non-finite number");
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

json density_to_json(const DensityMatrix& rho) {
  const int d = rho.dim();
  json re = json::array();
  json im = json::array();
  for (int r = 0; r < d; ++r) {
    json row_re = json::array();
    json row_im = json::array();
    for (int c = 0; c < d; ++c) {
      row_re.push_back(rho(r, c).real());
      row_im.push_back(rho(r, c).imag());
    }
    re.push_back(std::move(row_re));
    im.push_back(std::move(row_im));
  }
  return json{{"dim", d}, {"re", std::move(re)}, {"im", std::move(im)}};
}

DensityMatrix density_from_json(const json& j) {
  if (j.contains("rho_hat")) return density_from_json(j.at("rho_hat"));
  try {
    const int d = j.at("dim").get<int>();
    if (d < 1) throw ValidationError("density matrix dim must be >= 1");
    const auto& re = j.at("re");
    const auto& im = j.at("im");
    if (re.size() != static_cast<std::size_t>(d) || im.size() != static_cast<std::size_t>(d)) {
      throw ValidationError("density matrix arrays do not match dim");
    }
    CMatrix m(d, d);
    for (int r = 0; r < d; ++r) {
      if (re[r].size() != static_cast<std::size_t>(d) || im[r].size() != static_cast<std::size_t>(d)) {
        throw ValidationError("density matrix row length does not match dim");
      }
      for (int c = 0; c < d; ++c) m(r, c) = Complex(re[r][c].get<double>(), im[r][c].get<double>());
    }
    const double leak = 1.0 - m.trace().real();
    if (leak > kSqueezeLeakageTol) {
      throw ValidationError("density matrix trace " + std::to_string(1.0 - leak) + " is too far below 1");
    }
    return DensityMatrix(std::move(m), leak);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed density matrix JSON: ") + e.what());
  }
}

json grid_to_json(const GridSpec& g) {
  return json{{"r_max", g.r_max}, {"n_r", g.n_r}, {"n_theta", g.n_theta}};
}

GridSpec grid_from_json(const json& j) {
  return {j.at("r_max").get<double>(), j.at("n_r").get<int>(), j.at("n_theta").get<int>()};
}

json report_to_json(const ReconstructionReport& report) {
  json out{{"rho_hat", density_to_json(report.rho_hat)},
           {"raw_trace", report.raw_trace},
           {"hermiticity_defect", report.hermiticity_defect},
           {"min_eig_before_clip", report.min_eigenvalue_before_clip},
           {"params", {{"s", report.params.s}, {"eta", report.params.eta}, {"delta", report.params.delta}}},
           {"grid", grid_to_json(report.grid)}};
  if (std::isfinite(report.n_truncation_error_estimate)) {
    out["n_trunc_err"] = report.n_truncation_error_estimate;
  } else {
    out["n_trunc_err"] = nullptr;
  }
  return out;
}

std::filesystem::path sidecar_path(const std::filesystem::path& csv_path) {
  auto p = csv_path;
  p.replace_extension(".json");
  return p;
}

std::string table_csv(const MeasurementTable& table) {
  std::string out = table.sampled() ? "alpha_re,alpha_im,n,count\n" : "alpha_re,alpha_im,n,p\n";
  for (std::size_t j = 0; j < table.alphas.size(); ++j) {
    const std::string prefix =
        format_double(table.alphas[j].real()) + "," + format_double(table.alphas[j].imag()) + ",";
    for (int n = 0; n <= table.n_max; ++n) {
      out += prefix;
      out += std::to_string(n);
      out += ',';
      out += table.sampled() ? std::to_string(table.counts[j][n]) : format_double(table.probs[j][n]);
      out += '\n';
    }
  }
  return out;
}

json table_sidecar(const MeasurementTable& table) {
  json j{{"eta", table.eta},
         {"zeta_mag", table.squeeze ? table.squeeze->magnitude : 0.0},
         {"zeta_phase", table.squeeze ? table.squeeze->phase : 0.0},
         {"n_max", table.n_max},
         {"grid", grid_to_json(table.grid)}};
  if (table.shots) {
    j["shots"] = *table.shots;
    json overflow = json::array();
    for (double t : table.tail_mass) {
      overflow.push_back(static_cast<std::uint64_t>(std::llround(t * static_cast<double>(*table.shots))));
    }
    j["overflow"] = std::move(overflow);
  } else {
    j["shots"] = "exact";
  }
  return j;
}

MeasurementTable table_from(const std::string& csv_text, const json& sidecar) {
  MeasurementTable table;
  try {
    table.eta = sidecar.at("eta").get<double>();
    const double zmag = sidecar.value("zeta_mag", 0.0);
    const double zphase = sidecar.value("zeta_phase", 0.0);
    if (zmag != 0.0) table.squeeze = SqueezeSpec{zmag, zphase};
    table.n_max = sidecar.at("n_max").get<int>();
    table.grid = grid_from_json(sidecar.at("grid"));
    const auto& shots = sidecar.at("shots");
    if (shots.is_string()) {
      if (shots.get<std::string>() != "exact") throw ValidationError("shots must be a count or \"exact\"");
    } else {
      table.shots = shots.get<std::uint64_t>();
      if (*table.shots < 1) throw ValidationError("shots must be >= 1");
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed table sidecar: ") + e.what());
  }

  std::istringstream is(csv_text);
  std::string line;
  if (!std::getline(is, line)) throw ValidationError("empty measurement CSV");
  const std::string expected = table.sampled() ? "alpha_re,alpha_im,n,count" : "alpha_re,alpha_im,n,p";
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != expected) throw ValidationError("measurement CSV header '" + line + "', expected '" + expected + "'");

  const std::size_t width = static_cast<std::size_t>(table.n_max + 1);
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 4) throw ValidationError("measurement CSV row with " + std::to_string(fields.size()) + " fields");
    const Complex alpha(parse_double(fields[0]), parse_double(fields[1]));
    const std::uint64_t n = parse_uint(fields[2]);
    if (n == 0) {
      table.alphas.push_back(alpha);
      table.probs.emplace_back();
      if (table.sampled()) table.counts.emplace_back();
    }
    if (table.alphas.empty() || table.alphas.back() != alpha || n != table.probs.back().size()) {
      throw ValidationError("measurement CSV rows must list n = 0..n_max consecutively per alpha");
    }
    if (table.sampled()) {
      const std::uint64_t c = parse_uint(fields[3]);
      table.counts.back().push_back(c);
      table.probs.back().push_back(static_cast<double>(c) / static_cast<double>(*table.shots));
    } else {
      table.probs.back().push_back(parse_double(fields[3]));
    }
  }
  for (const auto& p : table.probs) {
    if (p.size() != width) throw ValidationError("measurement CSV: a node is missing photon-number rows");
  }

  table.tail_mass.resize(table.alphas.size());
  if (table.sampled()) {
    const auto overflow = sidecar.value("overflow", json::array());
    for (std::size_t j = 0; j < table.alphas.size(); ++j) {
      std::uint64_t total = 0;
      for (auto c : table.counts[j]) total += c;
      if (total > *table.shots) throw ValidationError("measurement CSV: counts exceed shots");
      table.tail_mass[j] = static_cast<double>(*table.shots - total) / static_cast<double>(*table.shots);
    }
    (void)overflow;
  } else {
    for (std::size_t j = 0; j < table.alphas.size(); ++j) {
      double sum = 0.0;
      for (double v : table.probs[j]) sum += v;
      table.tail_mass[j] = std::max(0.0, 1.0 - sum);
    }
  }
  table.validate();
  return table;
}

std::string weight_scan_csv(std::span<const Complex> nodes, std::span<const double> values) {
  if (nodes.size() != values.size()) throw ValidationError("scan: node/value count mismatch");
  std::string out = "alpha_re,alpha_im,value\n";
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    out += format_double(nodes[j].real()) + "," + format_double(nodes[j].imag()) + "," +
           format_double(values[j]) + "\n";
  }
  return out;
}

std::string characteristic_scan_csv(std::span<const Complex> xis, std::span<const Complex> chis) {
  if (xis.size() != chis.size()) throw ValidationError("scan: node/value count mismatch");
  std::string out = "xi_re,xi_im,chi_re,chi_im\n";
  for (std::size_t j = 0; j < xis.size(); ++j) {
    out += format_double(xis[j].real()) + "," + format_double(xis[j].imag()) + "," +
           format_double(chis[j].real()) + "," + format_double(chis[j].imag()) + "\n";
  }
  return out;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << text;
  if (!out) throw ValidationError("failed writing " + path.string());
}

json read_json(const std::filesystem::path& path) {
  try {
    return json::parse(read_text(path));
  } catch (const json::parse_error& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

void write_json(const std::filesystem::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

DensityMatrix read_density(const std::filesystem::path& path) { return density_from_json(read_json(path)); }

void write_density(const std::filesystem::path& path, const DensityMatrix& rho) {
  write_json(path, density_to_json(rho));
}

void write_table(const std::filesystem::path& csv_path, const MeasurementTable& table) {
  write_text(csv_path, table_csv(table));
  write_json(sidecar_path(csv_path), table_sidecar(table));
}

MeasurementTable read_table(const std::filesystem::path& csv_path) {
  return table_from(read_text(csv_path), read_json(sidecar_path(csv_path)));
}

}  // namespace pntomo::io
