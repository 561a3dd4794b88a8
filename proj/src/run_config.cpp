#include "filterstat/run_config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "filterstat/errors.hpp"

namespace filterstat {
namespace {

using nlohmann::json;

const std::set<std::string> kKeys = {
    "model", "omega_R", "gamma_sp", "gamma_ph", "chi", "gamma_S_e", "gamma_S_h", "tau_S_ns",
    "pump_P", "pump_ratios", "filters", "omega_F", "omega_F_absolute", "omega_X", "omega_F_line",
    "lambda", "sweep_axis", "sweep_min", "sweep_max", "sweep_points", "sweep_spacing",
    "optimize_lambda", "lambda_min", "lambda_max", "lambda_points", "lambda_spacing",
    "refine_steps", "first_local_minimum", "spectrum", "spectrum_min", "spectrum_max", "spectrum_points",
    "probe_lambda", "oracle", "output", "threads", "quad_rel_tol", "quad_abs_tol",
    "quad_max_subdivisions", "epsilon_branch", "theta_prune", "comment"};

double num(const json& j, const char* key, double def) {
  if (!j.contains(key)) return def;
  const auto& v = j.at(key);
  if (!v.is_number()) throw ConfigError(std::string("key '") + key + "': expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(std::string("key '") + key + "': not finite");
  return x;
}

int integer(const json& j, const char* key, int def) {
  if (!j.contains(key)) return def;
  const auto& v = j.at(key);
  if (!v.is_number_integer()) throw ConfigError(std::string("key '") + key + "': expected an integer");
  return v.get<int>();
}

bool flag(const json& j, const char* key, bool def) {
  if (!j.contains(key)) return def;
  const auto& v = j.at(key);
  if (!v.is_boolean()) throw ConfigError(std::string("key '") + key + "': expected true/false");
  return v.get<bool>();
}

std::string str(const json& j, const char* key, const std::string& def) {
  if (!j.contains(key)) return def;
  const auto& v = j.at(key);
  if (!v.is_string()) throw ConfigError(std::string("key '") + key + "': expected a string");
  return v.get<std::string>();
}

bool spacing(const json& j, const char* key) {
  const std::string s = str(j, key, "log");
  if (s == "log") return true;
  if (s == "linear") return false;
  throw ConfigError(std::string("key '") + key + "': expected \"log\" or \"linear\"");
}

}  // namespace

std::vector<double> GridSpec::values() const {
  std::vector<double> v(points);
  for (int i = 0; i < points; ++i) {
    const double t = points > 1 ? static_cast<double>(i) / (points - 1) : 0.0;
    v[i] = log ? std::exp(std::log(min) + t * (std::log(max) - std::log(min))) : min + t * (max - min);
  }
  if (points > 1) {
    v.front() = min;
    v.back() = max;
  }
  return v;
}

void GridSpec::validate(const std::string& what) const {
  if (!(min < max)) throw ConfigError(what + ": min must be smaller than max");
  if (points < 2) throw ConfigError(what + ": need at least 2 points");
  if (log && !(min > 0.0)) throw ConfigError(what + ": log spacing requires min > 0");
}

std::string to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::Lambda: return "lambda";
    case SweepAxis::Chi: return "chi";
    case SweepAxis::RabiRatio: return "rabi_ratio";
    case SweepAxis::OmegaF: return "omega_F";
  }
  return "?";
}

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    // byte offset -> line/column
    size_t line = 1, col = 1;
    for (size_t i = 0; i < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') { ++line; col = 1; } else { ++col; }
    }
    throw ConfigError("config: JSON syntax error at line " + std::to_string(line) + ", column " +
                      std::to_string(col) + ": " + e.what());
  }
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  for (const auto& [k, v] : j.items())
    if (!kKeys.count(k)) throw ConfigError("config: unknown key '" + k + "'");

  RunConfig c;
  c.raw = j;
  c.model = str(j, "model", "");
  if (c.model != "rf" && c.model != "qd") throw ConfigError("key 'model': expected \"rf\" or \"qd\"");

  if (c.model == "rf") {
    c.rf.omega_R = num(j, "omega_R", 1.0);
    c.rf.gamma_sp = num(j, "gamma_sp", 0.3 * c.rf.omega_R);
    c.rf.gamma_ph = num(j, "gamma_ph", 0.0);
    if (c.rf.omega_R < 0 || c.rf.gamma_sp < 0 || c.rf.gamma_ph < 0)
      throw ConfigError("rf parameters must be nonnegative");
  } else {
    c.qd.chi = num(j, "chi", 2000.0);
    c.qd.gamma_sp = num(j, "gamma_sp", 0.67);
    c.qd.gamma_ph = num(j, "gamma_ph", 20.0);
    c.qd.gamma_S_e = num(j, "gamma_S_e", 0.0);
    c.qd.gamma_S_h = num(j, "gamma_S_h", 0.0);
    c.tau_S_ns = num(j, "tau_S_ns", 0.0);
    if (c.tau_S_ns > 0.0) {
      const auto p = QDParams::with_spin_flip_time(c.qd.chi, c.qd.gamma_sp, c.qd.gamma_ph, c.tau_S_ns, 0.0);
      c.qd.gamma_S_e = p.gamma_S_e;
      c.qd.gamma_S_h = p.gamma_S_h;
    }
    c.qd.pump_P = num(j, "pump_P", 0.0);
    if (j.contains("pump_ratios")) {
      if (!j["pump_ratios"].is_array()) throw ConfigError("key 'pump_ratios': expected an array");
      for (const auto& v : j["pump_ratios"]) {
        if (!v.is_number() || !(v.get<double>() > 0.0))
          throw ConfigError("key 'pump_ratios': entries must be positive numbers");
        c.pump_ratios.push_back(v.get<double>());
      }
    }
    if (c.pump_ratios.empty() && !(c.qd.pump_P > 0.0))
      throw ConfigError("qd model needs 'pump_P' > 0 or 'pump_ratios'");
    for (double v : {c.qd.chi, c.qd.gamma_sp, c.qd.gamma_ph, c.qd.gamma_S_e, c.qd.gamma_S_h})
      if (v < 0.0) throw ConfigError("qd parameters must be nonnegative");
  }

  if (!j.contains("filters") || !j["filters"].is_array())
    throw ConfigError("key 'filters': expected an array of filter kinds");
  for (const auto& v : j["filters"]) {
    if (!v.is_string()) throw ConfigError("key 'filters': entries must be strings");
    try {
      c.filters.push_back(parse_filter_kind(v.get<std::string>()));
    } catch (const std::exception& e) {
      throw ConfigError(std::string("key 'filters': ") + e.what());
    }
  }
  if (c.filters.empty()) throw ConfigError("key 'filters': at least one filter is required");

  c.omega_F = num(j, "omega_F", 0.0);
  if (flag(j, "omega_F_absolute", false)) c.omega_F -= num(j, "omega_X", 0.0);
  c.omega_F_line = str(j, "omega_F_line", "");
  if (!c.omega_F_line.empty() && c.omega_F_line != "X" && c.omega_F_line != "XX")
    throw ConfigError("key 'omega_F_line': expected \"X\" or \"XX\"");
  if (!c.omega_F_line.empty() && c.model != "qd")
    throw ConfigError("key 'omega_F_line': only meaningful for the qd model");
  c.lambda = num(j, "lambda", 1.0);
  if (!(c.lambda > 0.0)) throw ConfigError("key 'lambda': must be positive");

  const std::string axis = str(j, "sweep_axis", "lambda");
  if (axis == "lambda") c.axis = SweepAxis::Lambda;
  else if (axis == "chi") c.axis = SweepAxis::Chi;
  else if (axis == "rabi_ratio") c.axis = SweepAxis::RabiRatio;
  else if (axis == "omega_F") c.axis = SweepAxis::OmegaF;
  else throw ConfigError("key 'sweep_axis': expected lambda, chi, rabi_ratio or omega_F");
  if (c.axis == SweepAxis::Chi && c.model != "qd") throw ConfigError("key 'sweep_axis': chi needs the qd model");
  if (c.axis == SweepAxis::RabiRatio && c.model != "rf")
    throw ConfigError("key 'sweep_axis': rabi_ratio needs the rf model");
  if (!j.contains("sweep_min") || !j.contains("sweep_max") || !j.contains("sweep_points"))
    throw ConfigError("sweep: keys 'sweep_min', 'sweep_max' and 'sweep_points' are required");
  c.sweep = {num(j, "sweep_min", 0.0), num(j, "sweep_max", 0.0), integer(j, "sweep_points", 0),
             spacing(j, "sweep_spacing")};
  c.sweep.validate("sweep");
  if ((c.axis == SweepAxis::Lambda || c.axis == SweepAxis::RabiRatio || c.axis == SweepAxis::Chi) &&
      !(c.sweep.min > 0.0))
    throw ConfigError("sweep: " + axis + " values must be positive");

  c.optimize_lambda = flag(j, "optimize_lambda", false);
  if (c.optimize_lambda) {
    if (c.axis == SweepAxis::Lambda) throw ConfigError("key 'optimize_lambda': not valid for a lambda sweep");
    c.lambda_grid = {num(j, "lambda_min", 0.0), num(j, "lambda_max", 0.0), integer(j, "lambda_points", 0),
                     spacing(j, "lambda_spacing")};
    c.lambda_grid.validate("lambda grid");
    if (!(c.lambda_grid.min > 0.0)) throw ConfigError("lambda grid: values must be positive");
    if (c.lambda_grid.points < 3) throw ConfigError("lambda grid: need at least 3 points");
  }
  c.refine_steps = integer(j, "refine_steps", 0);
  if (c.refine_steps < 0) throw ConfigError("key 'refine_steps': must be >= 0");
  c.first_local_minimum = flag(j, "first_local_minimum", false);

  c.spectrum = flag(j, "spectrum", false);
  if (c.spectrum) {
    c.spectrum_grid = {num(j, "spectrum_min", 0.0), num(j, "spectrum_max", 0.0),
                       integer(j, "spectrum_points", 0), false};
    c.spectrum_grid.validate("spectrum grid");
    c.probe_lambda = num(j, "probe_lambda", 0.0);
    if (!(c.probe_lambda > 0.0)) throw ConfigError("key 'probe_lambda': must be positive");
  }

  c.oracle = str(j, "oracle", "none");
  if (c.oracle != "none" && c.oracle != "sensor" && c.oracle != "kernel")
    throw ConfigError("key 'oracle': expected none, sensor or kernel");
  c.output = str(j, "output", "out");
  c.threads = integer(j, "threads", 0);
  c.kernel.quad.rel_tol = num(j, "quad_rel_tol", 1e-10);
  c.kernel.quad.abs_tol = num(j, "quad_abs_tol", 1e-14);
  c.kernel.quad.max_subdivisions = integer(j, "quad_max_subdivisions", 2000);
  c.kernel.epsilon_branch = num(j, "epsilon_branch", 1e-12);
  c.prune_rel = num(j, "theta_prune", 1e-14);
  if (!(c.kernel.quad.rel_tol > 0.0) || !(c.kernel.quad.abs_tol >= 0.0) || c.kernel.quad.max_subdivisions < 1)
    throw ConfigError("quadrature tolerances must be positive");
  if (!(c.kernel.epsilon_branch > 0.0)) throw ConfigError("key 'epsilon_branch': must be positive");
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

}  // namespace filterstat
