#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "flowlab/fourier.hpp"

namespace flowlab {

// Flat key=value experiment description. '#' starts a comment, section
// prefixes are plain dots in the key. Unknown keys are rejected. Mode lists
// are comma-separated m:cos:sin triples, e.g. "1:0.1:0, 2:0:0.05".
struct ExperimentConfig {
  std::string backend = "torus";  // torus | sphere

  std::string flow_kind = "ricci";  // static | ricci | list | rh
  double flow_a_n = 1.0;
  double flow_a0 = 1.0;
  double flow_decay = 0.0;

  int grid_n = 256;
  double grid_len_x = 6.283185307179586;
  double grid_len_y = 6.283185307179586;

  std::optional<double> dt;  // empty: auto
  double t_end = 0.5;

  std::string metric_preset = "conformal";  // flat | conformal | ab
  FourierSeries metric_u;                   // conformal: a = b = exp(2u)
  FourierSeries metric_log_a, metric_log_b;
  FourierSeries aux_v;        // coupled scalar for list / rh
  FourierSeries terminal_u;   // log of the terminal density

  std::vector<double> k_list{1.0, 2.0, 4.0};
  std::vector<double> c_list{0.25};
  std::string t_ref_mode = "auto";  // auto | none | value
  double t_ref_value = 0.0;
  std::optional<double> t_plus_ref;  // empty: none
  int stride = 0;                    // 0: auto
  bool bmda_numeric = false;

  double sphere_s0 = 1.0;
  int sphere_dim = 2;

  double tol_scale = 1.0;

  std::string out_csv = "series.csv";
  std::string out_json = "report.json";
};

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config_file(const std::string& path);

// Apply a single "key=value" override (sweep points, CLI overrides). Overrides
// skip validation so partial edits can be chained; re-validate before running.
void apply_override(ExperimentConfig& cfg, const std::string& assignment);

// Throws ConfigError on the first violated precondition.
void validate_config(const ExperimentConfig& cfg);

// Echo in canonical key order, one "key = value" per line (report provenance).
std::vector<std::string> echo_config(const ExperimentConfig& cfg);

std::string format_modes(const FourierSeries& f);

}  // namespace flowlab
