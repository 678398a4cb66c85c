#include "pntomo/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>

#include "pntomo/errors.hpp"
#include "pntomo/reconstruction.hpp"

namespace pntomo {

using nlohmann::json;

namespace {

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
  T v{};
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (text.empty() || ec != std::errc() || ptr != last) {
    throw ValidationError("--" + key + ": cannot parse '" + text + "'");
  }
  return v;
}

Complex complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2) return {j[0].get<double>(), j[1].get<double>()};
  if (j.is_object()) return {j.value("re", 0.0), j.value("im", 0.0)};
  throw ValidationError("complex values are [re, im], {\"re\", \"im\"} or a number");
}

json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

SqueezeSpec& squeeze_slot(RunConfig& cfg) {
  if (!cfg.squeeze) cfg.squeeze = SqueezeSpec{};
  return *cfg.squeeze;
}

void set_s(RunConfig& cfg, const json& v) {
  if (v.is_string()) {
    if (v.get<std::string>() != "auto") throw ValidationError("s must be a number or \"auto\"");
    cfg.s.reset();
  } else {
    cfg.s = v.get<double>();
  }
}

void set_shots(RunConfig& cfg, const json& v) {
  if (v.is_string()) {
    if (v.get<std::string>() != "exact") throw ValidationError("shots must be a count or \"exact\"");
    cfg.shots.reset();
  } else {
    if (!v.is_number_integer() || v.get<std::int64_t>() < 1) throw ValidationError("shots must be >= 1");
    cfg.shots = v.get<std::uint64_t>();
  }
}

}  // namespace

StateSpec state_from_json(const json& j) {
  try {
    const std::string type = j.at("type").get<std::string>();
    StateSpec spec;
    if (type == "vacuum") {
      spec = state::Fock{0};
    } else if (type == "fock") {
      spec = state::Fock{j.at("n").get<int>()};
    } else if (type == "coherent") {
      spec = state::Coherent{complex_from_json(j.at("beta"))};
    } else if (type == "thermal") {
      spec = state::Thermal{j.at("nbar").get<double>()};
    } else if (type == "cat") {
      double phase = j.value("phase", 0.0);
      if (j.contains("parity")) {
        const std::string parity = j.at("parity").get<std::string>();
        if (parity == "even") {
          phase = 0.0;
        } else if (parity == "odd") {
          phase = std::numbers::pi;
        } else {
          throw ValidationError("cat parity must be \"even\" or \"odd\"");
        }
      }
      spec = state::Cat{complex_from_json(j.at("beta")), phase};
    } else if (type == "squeezed_vacuum") {
      spec = state::SqueezedVacuum{{j.at("mag").get<double>(), j.value("phase", 0.0)}};
    } else {
      throw ValidationError("unknown state type '" + type + "'");
    }
    validate(spec);
    return spec;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed state spec: ") + e.what());
  }
}

json state_to_json(const StateSpec& spec) {
  return std::visit(
      [](const auto& s) -> json {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, state::Fock>) {
          return {{"type", "fock"}, {"n", s.n}};
        } else if constexpr (std::is_same_v<T, state::Coherent>) {
          return {{"type", "coherent"}, {"beta", complex_to_json(s.beta)}};
        } else if constexpr (std::is_same_v<T, state::Thermal>) {
          return {{"type", "thermal"}, {"nbar", s.nbar}};
        } else if constexpr (std::is_same_v<T, state::Cat>) {
          return {{"type", "cat"}, {"beta", complex_to_json(s.beta)}, {"phase", s.parity_phase}};
        } else {
          return {{"type", "squeezed_vacuum"}, {"mag", s.zeta.magnitude}, {"phase", s.zeta.phase}};
        }
      },
      spec);
}

GridSpec RunConfig::resolved_grid(double amplitude) const {
  GridSpec g;
  g.r_max = r_max.value_or(kRadiusMargin + amplitude);
  g.n_r = n_r.value_or(g.n_r);
  g.n_theta = n_theta.value_or(g.n_theta);
  return g;
}

void RunConfig::validate() const {
  if (state) pntomo::validate(*state);
  const int d = resolved_dim();
  if (d < 1) throw ValidationError("dim must be >= 1, got " + std::to_string(d));
  const double e = resolved_eta();
  if (!(e > 0.0 && e <= 1.0)) throw ValidationError("eta must lie in (0, 1], got " + std::to_string(e));
  const int nm = resolved_n_max();
  if (nm < 0 || nm >= d) {
    throw ValidationError("nmax must satisfy 0 <= nmax < dim; got nmax " + std::to_string(nm) + ", dim " +
                          std::to_string(d));
  }
  if (squeeze) squeeze->validate();
  if (r_max && !(*r_max > 0.0)) throw ValidationError("rmax must be positive");
  if (n_r && *n_r < 2) throw ValidationError("nr must be >= 2");
  if (n_theta && *n_theta < 4) throw ValidationError("ntheta must be >= 4");
  if (shots && *shots < 1) throw ValidationError("shots must be >= 1");
  if (scan != "weight" && scan != "chi") throw ValidationError("scan must be \"weight\" or \"chi\"");
  if (s) {
    if (!std::isfinite(*s)) throw ValidationError("s must be finite");
    require_admissible(KernelParams{*s, e, delta()});
  }
}

RunConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("config must be a JSON object");
  RunConfig cfg;
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "state") {
        cfg.state = state_from_json(v);
      } else if (key == "dim") {
        cfg.dim = v.get<int>();
      } else if (key == "eta") {
        cfg.eta = v.get<double>();
      } else if (key == "s") {
        set_s(cfg, v);
      } else if (key == "squeeze_mag") {
        squeeze_slot(cfg).magnitude = v.get<double>();
      } else if (key == "squeeze_phase") {
        squeeze_slot(cfg).phase = v.get<double>();
      } else if (key == "squeeze") {
        cfg.squeeze = SqueezeSpec{v.value("mag", 0.0), v.value("phase", 0.0)};
      } else if (key == "rmax") {
        cfg.r_max = v.get<double>();
      } else if (key == "nr") {
        cfg.n_r = v.get<int>();
      } else if (key == "ntheta") {
        cfg.n_theta = v.get<int>();
      } else if (key == "grid") {
        if (v.contains("r_max")) cfg.r_max = v.at("r_max").get<double>();
        if (v.contains("n_r")) cfg.n_r = v.at("n_r").get<int>();
        if (v.contains("n_theta")) cfg.n_theta = v.at("n_theta").get<int>();
      } else if (key == "nmax") {
        cfg.n_max = v.get<int>();
      } else if (key == "shots") {
        set_shots(cfg, v);
      } else if (key == "seed") {
        cfg.seed = v.get<std::uint64_t>();
      } else if (key == "out") {
        cfg.out = v.get<std::string>();
      } else if (key == "scan") {
        cfg.scan = v.get<std::string>();
      } else {
        throw ValidationError("unknown config field '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed config: ") + e.what());
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config " + path);
  try {
    return config_from_json(json::parse(in));
  } catch (const json::parse_error& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

void apply_override(RunConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "seed") {
    cfg.seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "dim") {
    cfg.dim = parse_number<int>(key, value);
  } else if (key == "eta") {
    cfg.eta = parse_number<double>(key, value);
  } else if (key == "s") {
    if (value == "auto") {
      cfg.s.reset();
    } else {
      cfg.s = parse_number<double>(key, value);
    }
  } else if (key == "squeeze-mag") {
    squeeze_slot(cfg).magnitude = parse_number<double>(key, value);
  } else if (key == "squeeze-phase") {
    squeeze_slot(cfg).phase = parse_number<double>(key, value);
  } else if (key == "rmax") {
    cfg.r_max = parse_number<double>(key, value);
  } else if (key == "nr") {
    cfg.n_r = parse_number<int>(key, value);
  } else if (key == "ntheta") {
    cfg.n_theta = parse_number<int>(key, value);
  } else if (key == "nmax") {
    cfg.n_max = parse_number<int>(key, value);
  } else if (key == "shots") {
    if (value == "exact") {
      cfg.shots.reset();
    } else {
      const auto n = parse_number<std::uint64_t>(key, value);
      if (n < 1) throw ValidationError("--shots must be >= 1");
      cfg.shots = n;
    }
  } else if (key == "out") {
    cfg.out = value;
  } else if (key == "scan") {
    cfg.scan = value;
  } else {
    throw ValidationError("unknown option --" + key);
  }
}

}  // namespace pntomo
