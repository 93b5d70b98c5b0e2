#include "flowlab/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "flowlab/errors.hpp"
#include "flowlab/sphere.hpp"

namespace flowlab {

namespace {

std::string trim(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

double parse_real(const std::string& key, const std::string& v) {
  size_t pos = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &pos);
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected a real number, got '" + v + "'");
  }
  if (pos != v.size() || !std::isfinite(x))
    throw ConfigError(key + ": expected a real number, got '" + v + "'");
  return x;
}

int parse_int(const std::string& key, const std::string& v) {
  size_t pos = 0;
  long x = 0;
  try {
    x = std::stol(v, &pos);
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected an integer, got '" + v + "'");
  }
  if (pos != v.size())
    throw ConfigError(key + ": expected an integer, got '" + v + "'");
  return static_cast<int>(x);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  if (!s.empty() && s.back() == sep) out.push_back("");
  return out;
}

std::vector<double> parse_real_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  for (const auto& item : split(v, ',')) {
    if (item.empty()) throw ConfigError(key + ": empty entry in list '" + v + "'");
    out.push_back(parse_real(key, item));
  }
  if (out.empty()) throw ConfigError(key + ": list must not be empty");
  return out;
}

// "m:cos:sin, m:cos:sin, ..."; m = 0 sets the constant part.
FourierSeries parse_modes(const std::string& key, const std::string& v) {
  FourierSeries f;
  for (const auto& item : split(v, ',')) {
    auto parts = split(item, ':');
    if (parts.size() != 3)
      throw ConfigError(key + ": mode '" + item + "' is not m:cos:sin");
    int m = parse_int(key, parts[0]);
    double c = parse_real(key, parts[1]);
    double s = parse_real(key, parts[2]);
    if (m < 0) throw ConfigError(key + ": mode number must be >= 0");
    if (m == 0) {
      if (s != 0.0) throw ConfigError(key + ": mode 0 has no sin part");
      f.base += c;
    } else {
      f.modes.push_back({m, c, s});
    }
  }
  return f;
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string fmt_list(const std::vector<double>& xs) {
  std::string out;
  for (size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ",";
    out += fmt(xs[i]);
  }
  return out;
}

void validate(const ExperimentConfig& c) {
  auto fail = [](const std::string& msg) { throw ConfigError(msg); };

  if (c.backend != "torus" && c.backend != "sphere")
    fail("backend must be torus or sphere, got '" + c.backend + "'");
  if (c.flow_kind != "static" && c.flow_kind != "ricci" && c.flow_kind != "list" &&
      c.flow_kind != "rh")
    fail("flow.kind must be static, ricci, list or rh, got '" + c.flow_kind + "'");
  if (c.t_end <= 0.0) fail("time.t_end must be positive");
  if (c.dt) {
    if (*c.dt <= 0.0) fail("time.dt must be positive or auto");
    double steps = c.t_end / *c.dt;
    if (std::abs(steps - std::round(steps)) > 1e-9 * std::max(1.0, steps) ||
        std::round(steps) < 1.0)
      fail("time.dt must divide t_end into a whole number of steps");
  }
  if (c.k_list.empty()) fail("series.k must not be empty");
  for (double k : c.k_list)
    if (k < 1.0) fail("series.k entries must be >= 1");
  if (c.c_list.empty()) fail("series.c must not be empty");
  for (double cc : c.c_list)
    if (cc <= 0.0) fail("series.c entries must be positive");
  if (c.stride < 0) fail("series.stride must be positive or auto");
  if (c.t_ref_mode != "auto" && c.t_ref_mode != "none" && c.t_ref_mode != "value")
    fail("refs.T_ref must be auto, none or a real");
  if (c.t_ref_mode == "value" && c.t_ref_value <= c.t_end)
    fail("refs.T_ref must exceed t_end so tau stays positive");
  if (c.t_plus_ref && *c.t_plus_ref >= 0.0)
    fail("refs.T_plus_ref must be negative or none; sigma = t - T_plus_ref must stay positive from t = 0");
  if (c.tol_scale <= 0.0) fail("tol.scale must be positive");
  if (c.out_csv.empty() || c.out_json.empty()) fail("output paths must not be empty");

  if (c.backend == "sphere") {
    if (c.flow_kind != "ricci") fail("sphere backend supports flow.kind=ricci only");
    if (c.sphere_dim != 2 && c.sphere_dim != 3) fail("sphere.dim must be 2 or 3");
    if (c.sphere_s0 <= 0.0) fail("sphere.s0 must be positive");
    double blowup = sphere_blowup_time(c.sphere_s0, c.sphere_dim);
    if (c.t_end >= blowup)
      fail("time.t_end must stay below the collapse time " + fmt(blowup));
    if (!c.metric_u.empty() || !c.metric_log_a.empty() || !c.metric_log_b.empty() ||
        !c.aux_v.empty() || !c.terminal_u.empty())
      fail("metric, aux and terminal keys do not apply to the sphere backend");
    return;
  }

  if (c.grid_n < 16 || c.grid_n % 2 != 0) fail("grid.n must be even and >= 16");
  if (c.grid_len_x <= 0.0 || c.grid_len_y <= 0.0) fail("grid lengths must be positive");
  if (c.metric_preset == "flat") {
    if (!c.metric_u.empty() || !c.metric_log_a.empty() || !c.metric_log_b.empty())
      fail("metric.preset=flat takes no mode lists");
  } else if (c.metric_preset == "conformal") {
    if (!c.metric_log_a.empty() || !c.metric_log_b.empty())
      fail("metric.preset=conformal uses metric.u, not metric.a/metric.b");
  } else if (c.metric_preset == "ab") {
    if (!c.metric_u.empty())
      fail("metric.preset=ab uses metric.a/metric.b, not metric.u");
  } else {
    fail("metric.preset must be flat, conformal or ab, got '" + c.metric_preset + "'");
  }
  bool has_aux_kind = c.flow_kind == "list" || c.flow_kind == "rh";
  if (!has_aux_kind && !c.aux_v.empty())
    fail("aux.v only applies to list and rh flows");
  if (c.flow_kind == "list" && c.flow_a_n <= 0.0) fail("flow.a_n must be positive");
  if (c.flow_kind == "rh") {
    if (c.flow_a0 <= 0.0) fail("flow.a0 must be positive");
    if (c.flow_decay < 0.0) fail("flow.decay must be nonnegative");
    if (c.flow_a0 - c.flow_decay * c.t_end <= 0.0)
      fail("flow coupling a0 - decay*t must stay positive up to t_end");
  }
}

}  // namespace

void validate_config(const ExperimentConfig& cfg) { validate(cfg); }

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  std::set<std::string> seen;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    if (!seen.insert(key).second) throw ConfigError("duplicate key: " + key);
    apply_override(cfg, key + "=" + value);
  }
  validate(cfg);
  return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

void apply_override(ExperimentConfig& cfg, const std::string& assignment) {
  auto eq = assignment.find('=');
  if (eq == std::string::npos)
    throw ConfigError("override '" + assignment + "' is not key=value");
  std::string key = trim(assignment.substr(0, eq));
  std::string v = trim(assignment.substr(eq + 1));

  if (key == "backend") cfg.backend = v;
  else if (key == "flow.kind") cfg.flow_kind = v;
  else if (key == "flow.a_n") cfg.flow_a_n = parse_real(key, v);
  else if (key == "flow.a0") cfg.flow_a0 = parse_real(key, v);
  else if (key == "flow.decay") cfg.flow_decay = parse_real(key, v);
  else if (key == "grid.n") cfg.grid_n = parse_int(key, v);
  else if (key == "grid.len_x") cfg.grid_len_x = parse_real(key, v);
  else if (key == "grid.len_y") cfg.grid_len_y = parse_real(key, v);
  else if (key == "time.dt") {
    if (v == "auto") cfg.dt.reset();
    else cfg.dt = parse_real(key, v);
  } else if (key == "time.t_end") cfg.t_end = parse_real(key, v);
  else if (key == "metric.preset") cfg.metric_preset = v;
  else if (key == "metric.u") cfg.metric_u = parse_modes(key, v);
  else if (key == "metric.a") cfg.metric_log_a = parse_modes(key, v);
  else if (key == "metric.b") cfg.metric_log_b = parse_modes(key, v);
  else if (key == "aux.v") cfg.aux_v = parse_modes(key, v);
  else if (key == "terminal.u") cfg.terminal_u = parse_modes(key, v);
  else if (key == "series.k") cfg.k_list = parse_real_list(key, v);
  else if (key == "series.c") cfg.c_list = parse_real_list(key, v);
  else if (key == "series.stride") {
    if (v == "auto") cfg.stride = 0;
    else {
      cfg.stride = parse_int(key, v);
      if (cfg.stride < 1) throw ConfigError("series.stride must be positive or auto");
    }
  } else if (key == "series.bmda") {
    if (v == "closed") cfg.bmda_numeric = false;
    else if (v == "numeric") cfg.bmda_numeric = true;
    else throw ConfigError("series.bmda must be closed or numeric");
  } else if (key == "refs.T_ref") {
    if (v == "auto" || v == "none") {
      cfg.t_ref_mode = v;
    } else {
      cfg.t_ref_mode = "value";
      cfg.t_ref_value = parse_real(key, v);
    }
  } else if (key == "refs.T_plus_ref") {
    if (v == "none") cfg.t_plus_ref.reset();
    else cfg.t_plus_ref = parse_real(key, v);
  } else if (key == "sphere.s0") cfg.sphere_s0 = parse_real(key, v);
  else if (key == "sphere.dim") cfg.sphere_dim = parse_int(key, v);
  else if (key == "tol.scale") cfg.tol_scale = parse_real(key, v);
  else if (key == "output.csv") cfg.out_csv = v;
  else if (key == "output.json") cfg.out_json = v;
  else throw ConfigError("unknown config key: " + key);
}

std::string format_modes(const FourierSeries& f) {
  std::string out;
  if (f.base != 0.0) out += "0:" + fmt(f.base) + ":0";
  for (const auto& m : f.modes) {
    if (!out.empty()) out += ",";
    out += std::to_string(m.m) + ":" + fmt(m.amp_cos) + ":" + fmt(m.amp_sin);
  }
  return out;
}

std::vector<std::string> echo_config(const ExperimentConfig& c) {
  std::vector<std::string> out;
  auto put = [&](const std::string& k, const std::string& v) {
    out.push_back(k + " = " + v);
  };
  put("backend", c.backend);
  put("flow.kind", c.flow_kind);
  if (c.flow_kind == "list") put("flow.a_n", fmt(c.flow_a_n));
  if (c.flow_kind == "rh") {
    put("flow.a0", fmt(c.flow_a0));
    put("flow.decay", fmt(c.flow_decay));
  }
  if (c.backend == "torus") {
    put("grid.n", std::to_string(c.grid_n));
    put("grid.len_x", fmt(c.grid_len_x));
    put("grid.len_y", fmt(c.grid_len_y));
  } else {
    put("sphere.s0", fmt(c.sphere_s0));
    put("sphere.dim", std::to_string(c.sphere_dim));
  }
  put("time.dt", c.dt ? fmt(*c.dt) : "auto");
  put("time.t_end", fmt(c.t_end));
  if (c.backend == "torus") {
    put("metric.preset", c.metric_preset);
    if (!c.metric_u.empty()) put("metric.u", format_modes(c.metric_u));
    if (!c.metric_log_a.empty()) put("metric.a", format_modes(c.metric_log_a));
    if (!c.metric_log_b.empty()) put("metric.b", format_modes(c.metric_log_b));
    if (!c.aux_v.empty()) put("aux.v", format_modes(c.aux_v));
    if (!c.terminal_u.empty()) put("terminal.u", format_modes(c.terminal_u));
  }
  put("series.k", fmt_list(c.k_list));
  put("series.c", fmt_list(c.c_list));
  put("series.stride", c.stride == 0 ? "auto" : std::to_string(c.stride));
  put("series.bmda", c.bmda_numeric ? "numeric" : "closed");
  put("refs.T_ref", c.t_ref_mode == "value" ? fmt(c.t_ref_value) : c.t_ref_mode);
  put("refs.T_plus_ref", c.t_plus_ref ? fmt(*c.t_plus_ref) : "none");
  put("tol.scale", fmt(c.tol_scale));
  put("output.csv", c.out_csv);
  put("output.json", c.out_json);
  return out;
}

}  // namespace flowlab
