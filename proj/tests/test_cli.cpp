#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "flowlab/config.hpp"
#include "flowlab/errors.hpp"
#include "flowlab/report.hpp"
#include "flowlab/runner.hpp"
#include "flowlab/sphere.hpp"

using namespace flowlab;

namespace {

const std::vector<double>& column(const RunReport& rep, const std::string& name) {
  for (size_t i = 0; i < rep.header.size(); ++i)
    if (rep.header[i] == name) return rep.columns[i];
  throw std::runtime_error("no column " + name);
}

double max_abs_finite(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v)
    if (std::isfinite(x)) m = std::max(m, std::abs(x));
  return m;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("config text parses into fields and echoes canonically") {
  std::string text =
      "# experiment\n"
      "backend = torus\n"
      "flow.kind = rh\n"
      "flow.a0 = 1.2\n"
      "flow.decay = 0.6\n"
      "grid.n = 64\n"
      "time.dt = auto\n"
      "time.t_end = 0.25\n"
      "metric.preset = conformal\n"
      "metric.u = 1:0.1:0\n"
      "aux.v = 1:0:0.5, 2:0.08:0\n"
      "terminal.u = 1:0.3:0\n"
      "series.k = 1,2,4\n"
      "series.c = 0.25,0.5\n"
      "refs.T_ref = 0.3\n"
      "refs.T_plus_ref = -0.125\n"
      "output.csv = run.csv\n";
  ExperimentConfig cfg = parse_config(text);
  CHECK(cfg.flow_kind == "rh");
  CHECK(cfg.flow_a0 == 1.2);
  CHECK(cfg.grid_n == 64);
  CHECK(!cfg.dt.has_value());
  CHECK(cfg.t_end == 0.25);
  CHECK(cfg.metric_u.modes.size() == 1);
  CHECK(cfg.aux_v.modes.size() == 2);
  CHECK(cfg.c_list == std::vector<double>{0.25, 0.5});
  CHECK(cfg.t_ref_mode == "value");
  CHECK(cfg.t_ref_value == 0.3);
  CHECK(cfg.t_plus_ref == -0.125);
  CHECK(cfg.out_csv == "run.csv");

  auto echo = echo_config(cfg);
  auto has = [&](const std::string& line) {
    for (const auto& l : echo)
      if (l == line) return true;
    return false;
  };
  CHECK(has("flow.kind = rh"));
  CHECK(has("time.dt = auto"));
  CHECK(has("series.c = 0.25,0.5"));
  CHECK(has("refs.T_plus_ref = -0.125"));

  ExperimentConfig copy = cfg;
  apply_override(copy, "flow.kind=list");
  apply_override(copy, "flow.a_n=2");
  validate_config(copy);
  CHECK(copy.flow_kind == "list");
  CHECK(copy.flow_a_n == 2.0);
}

TEST_CASE("config rejections") {
  CHECK_THROWS_AS(parse_config("backend = torus\nbackend = torus\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("grid.m = 3\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("grid.n = 17\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("time.dt = 0.07\ntime.t_end = 0.25\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("time.t_end = -1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("flow.kind = banana\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("refs.T_ref = 0.1\ntime.t_end = 0.5\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("refs.T_plus_ref = 0.1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("series.k =\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("series.c = -0.25\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("metric.preset = flat\nmetric.u = 1:0.1:0\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("backend = sphere\nmetric.u = 1:0.1:0\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("backend = sphere\ntime.t_end = 0.6\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("flow.kind = rh\nflow.decay = 3\ntime.t_end = 0.5\n"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config("flow.kind = static\naux.v = 1:0.1:0\n"), ConfigError);
}

TEST_CASE("auto step divides the horizon exactly") {
  double dt = auto_dt(3.1e-4, 0.3);
  double steps = 0.3 / dt;
  CHECK(steps == doctest::Approx(std::round(steps)).epsilon(1e-15));
  CHECK(dt <= 3.1e-4);
  CHECK_THROWS_AS(auto_dt(0.0, 1.0), ConfigError);
}

TEST_CASE("static flat run: derivative columns vanish, E flat") {
  ExperimentConfig cfg;
  cfg.flow_kind = "static";
  cfg.metric_preset = "flat";
  cfg.grid_n = 32;
  cfg.t_end = 0.2;
  cfg.t_ref_mode = "none";
  RunReport rep = run_experiment(cfg);
  CHECK(rep.passed());
  CHECK(rep.rows() >= 3);
  for (const char* name : {"E1_formula", "E1_fd", "E2_formula", "E2_fd",
                           "dF_k1_formula", "dF_k2_formula", "dF_k4_formula",
                           "lambda_c0.25", "lambda_prime_formula", "lambda_prime_fd",
                           "min_theta", "min_bmda"})
    CHECK(max_abs_finite(column(rep, name)) <= 1e-12);
  const auto& W = column(rep, "W");
  for (double w : W) CHECK(!std::isfinite(w));
  const auto& E = column(rep, "E");
  for (size_t i = 1; i + 1 < E.size(); ++i)
    CHECK(E[i + 1] - 2.0 * E[i] + E[i - 1] >= -1e-12);
}

TEST_CASE("sphere run matches the closed forms row by row") {
  ExperimentConfig cfg;
  cfg.backend = "sphere";
  cfg.sphere_s0 = 1.0;
  cfg.sphere_dim = 2;
  cfg.t_end = 0.2;
  cfg.dt = 0.01;
  cfg.t_ref_mode = "value";
  cfg.t_ref_value = 0.5;
  cfg.k_list = {1.0, 2.0};
  cfg.c_list = {0.25};
  RunReport rep = run_experiment(cfg);
  CHECK(rep.passed());
  const auto& ts = column(rep, "t");
  double vu = unit_sphere_volume(2);
  for (size_t i = 0; i < ts.size(); ++i) {
    SphereState st = sphere_flow(1.0, 2, vu, ts[i]);
    SphereReport ref = sphere_reports(st, ts[i], 0.25, 2.0, 0.5);
    CHECK(column(rep, "vol")[i] == doctest::Approx(ref.vol).epsilon(1e-10));
    CHECK(column(rep, "E")[i] == doctest::Approx(ref.E).epsilon(1e-10));
    CHECK(column(rep, "E1_formula")[i] == doctest::Approx(ref.E1).epsilon(1e-10));
    CHECK(column(rep, "E2_formula")[i] == doctest::Approx(ref.E2).epsilon(1e-10));
    CHECK(column(rep, "F_k2")[i] == doctest::Approx(ref.F_k).epsilon(1e-10));
    CHECK(column(rep, "lambda_c0.25")[i] == doctest::Approx(ref.lam).epsilon(1e-10));
    CHECK(column(rep, "lambda_bar")[i] == doctest::Approx(ref.lam_bar).epsilon(1e-10));
    CHECK(std::abs(column(rep, "W")[i] - (std::log(2.0) - 1.0)) <= 1e-10);
    CHECK(std::abs(column(rep, "dW_formula")[i]) <= 1e-10);
  }
}

TEST_CASE("ricci torus run: every verdict passes" * doctest::timeout(120)) {
  ExperimentConfig cfg;
  cfg.flow_kind = "ricci";
  cfg.metric_preset = "conformal";
  cfg.metric_u.modes.push_back({1, 0.1, 0.0});
  cfg.terminal_u.modes.push_back({1, 0.3, 0.0});
  cfg.grid_n = 256;
  cfg.t_end = 0.3;
  cfg.t_plus_ref = -0.5;
  RunReport rep = run_experiment(cfg);
  auto names = {"mass_conservation", "volume_identity", "E1_fd_match", "E2_fd_match",
                "dW_fd_match", "dWplus_fd_match", "E1_nondecreasing", "E_convexity",
                "F_k1_nondecreasing", "W_nondecreasing", "Wplus_nondecreasing",
                "lambda_bar_nondecreasing"};
  for (const char* want : names) {
    bool found = false;
    for (const auto& v : rep.verdicts)
      if (v.name == want) {
        found = true;
        CHECK_MESSAGE(v.pass, want, " measured ", v.measured, " tol ", v.tol);
      }
    CHECK_MESSAGE(found, "missing verdict ", want);
  }
  CHECK(rep.passed());
}

TEST_CASE("CSV rendering: exact header, full precision, NaN as empty") {
  ExperimentConfig cfg;
  cfg.flow_kind = "static";
  cfg.metric_preset = "flat";
  cfg.grid_n = 16;
  cfg.t_end = 0.1;
  cfg.t_ref_mode = "none";
  cfg.k_list = {1.0};
  cfg.c_list = {0.25};
  RunReport rep = run_experiment(cfg);
  std::string csv = render_csv(rep);
  std::stringstream ss(csv);
  std::string line;
  REQUIRE(std::getline(ss, line));
  CHECK(line ==
        "t, vol, E, E1_formula, E1_fd, E2_formula, E2_fd, F_k1, dF_k1_formula, W, "
        "dW_formula, Wplus, dWplus_formula, lambda_c0.25, lambda_prime_formula, "
        "lambda_prime_fd, lambda_bar, min_theta, min_bmda");
  REQUIRE(std::getline(ss, line));
  std::vector<std::string> cells;
  size_t pos = 0;
  while (pos <= line.size()) {
    size_t comma = line.find(", ", pos);
    if (comma == std::string::npos) {
      cells.push_back(line.substr(pos));
      break;
    }
    cells.push_back(line.substr(pos, comma - pos));
    pos = comma + 2;
  }
  REQUIRE(cells.size() == rep.header.size());
  CHECK(cells[9].empty());   // W undefined without a reference time
  CHECK(cells[11].empty());  // Wplus likewise
  CHECK(std::stod(cells[1]) == column(rep, "vol")[0]);  // %.17g round-trips
  CHECK(std::stod(cells[2]) == column(rep, "E")[0]);

  RunReport again = run_experiment(cfg);
  CHECK(render_csv(again) == csv);
  CHECK(render_json(again) == render_json(rep));
}

#ifdef FLOWLAB_CLI_PATH
namespace {

int shell(const std::string& cmd) {
  int rc = std::system(cmd.c_str());
  REQUIRE(rc != -1);
  REQUIRE(WIFEXITED(rc));
  return WEXITSTATUS(rc);
}

struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const char* leaf)
      : path(std::filesystem::temp_directory_path() / leaf) {
    std::filesystem::remove_all(path);
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_CASE("binary: run, determinism, env override, sweep, exit codes" *
          doctest::timeout(300)) {
  const std::string exe = FLOWLAB_CLI_PATH;
  TempDir tmp("flowlab_cli_case");
  auto cfg_path = tmp.path / "static.cfg";
  {
    std::ofstream out(cfg_path);
    out << "flow.kind = static\nmetric.preset = flat\ngrid.n = 16\n"
           "time.t_end = 0.04\nrefs.T_ref = none\nseries.k = 1\nseries.c = 0.25\n";
  }
  std::string quiet = " > " + (tmp.path / "log.txt").string() + " 2>&1";

  auto out1 = tmp.path / "out1";
  CHECK(shell(exe + " --out-dir " + out1.string() + " run " + cfg_path.string() +
              quiet) == 0);
  CHECK(std::filesystem::exists(out1 / "series.csv"));
  CHECK(std::filesystem::exists(out1 / "report.json"));
  CHECK(slurp(out1 / "report.json").find("\"passed\": true") != std::string::npos);

  auto out2 = tmp.path / "out2";
  CHECK(shell(exe + " --out-dir " + out2.string() + " run " + cfg_path.string() +
              quiet) == 0);
  CHECK(slurp(out1 / "series.csv") == slurp(out2 / "series.csv"));

  auto out3 = tmp.path / "out3";
  CHECK(shell("FLOWLAB_OUT=" + out3.string() + " " + exe + " --out-dir " +
              out1.string() + " run " + cfg_path.string() + quiet) == 0);
  CHECK(std::filesystem::exists(out3 / "series.csv"));

  auto sweep_dir = tmp.path / "sweep";
  CHECK(shell(exe + " --out-dir " + sweep_dir.string() + " sweep " + cfg_path.string() +
              " --param flow.kind=static,ricci" + quiet) == 0);
  CHECK(std::filesystem::exists(sweep_dir / "flow.kind=static" / "series.csv"));
  CHECK(std::filesystem::exists(sweep_dir / "flow.kind=ricci" / "series.csv"));

  auto bad_cfg = tmp.path / "bad.cfg";
  {
    std::ofstream out(bad_cfg);
    out << "grid.m = 3\n";
  }
  CHECK(shell(exe + " run " + bad_cfg.string() + quiet) == 2);
  CHECK(shell(exe + " run " + (tmp.path / "missing.cfg").string() + quiet) == 2);
  CHECK(shell(exe + " verify nosuch" + quiet) == 2);

  auto blow_cfg = tmp.path / "blow.cfg";
  {
    std::ofstream out(blow_cfg);
    out << "flow.kind = ricci\nmetric.preset = conformal\nmetric.u = 1:0.3:0\n"
           "grid.n = 64\ntime.dt = 0.05\ntime.t_end = 0.2\n";
  }
  CHECK(shell(exe + " --out-dir " + (tmp.path / "blow").string() + " run " +
              blow_cfg.string() + quiet) == 3);
  CHECK(!std::filesystem::exists(tmp.path / "blow" / "series.csv"));
}

TEST_CASE("binary: verify geometry passes and writes a report" * doctest::timeout(300)) {
  const std::string exe = FLOWLAB_CLI_PATH;
  TempDir tmp("flowlab_cli_verify");
  std::string quiet = " > " + (tmp.path / "log.txt").string() + " 2>&1";
  CHECK(shell(exe + " --out-dir " + tmp.path.string() + " verify geometry" + quiet) ==
        0);
  std::string rep = slurp(tmp.path / "verify_geometry.json");
  CHECK(rep.find("\"passed\": true") != std::string::npos);
  CHECK(rep.find("bianchi_contracted") != std::string::npos);
  CHECK(shell(exe + " --out-dir " + tmp.path.string() +
              " --tol-scale 1e-12 verify geometry" + quiet) == 1);
}
#endif

TEST_SUITE_END();
