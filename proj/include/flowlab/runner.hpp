#pragma once

#include <string>
#include <vector>

#include "flowlab/config.hpp"

namespace flowlab {

// One quantitative check attached to a run. measured is compared against tol
// (already multiplied by the configured scale); smaller is better.
struct Verdict {
  std::string name;
  double measured = 0.0;
  double tol = 0.0;
  bool pass = false;
};

// Column-oriented result table plus the verdicts and provenance that go into
// the JSON report. NaN cells render as empty CSV fields.
struct RunReport {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;  // [col][row]
  std::vector<Verdict> verdicts;

  std::vector<std::string> config_echo;
  std::string backend;
  std::string flow_name;
  int grid_n = 0;
  double dt = 0.0;
  int steps = 0;
  int stride = 1;
  std::string build_id;
  std::string out_csv, out_json;

  size_t rows() const { return columns.empty() ? 0 : columns[0].size(); }
  bool passed() const;
};

// Step count for dt = "auto": the stability bound rounded so the step divides
// t_end exactly.
double auto_dt(double stable, double t_end);

RunReport run_experiment(const ExperimentConfig& cfg);

}  // namespace flowlab
