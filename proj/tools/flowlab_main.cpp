#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "flowlab/checks.hpp"
#include "flowlab/config.hpp"
#include "flowlab/errors.hpp"
#include "flowlab/report.hpp"
#include "flowlab/runner.hpp"
#include "json.hpp"

namespace {

// FLOWLAB_OUT wins over --out-dir so wrappers can redirect a whole invocation
// without touching its arguments.
std::string resolve_out_dir(const std::string& flag_value) {
  if (const char* env = std::getenv("FLOWLAB_OUT"); env && *env) return env;
  return flag_value;
}

void print_verdicts(const flowlab::RunReport& report) {
  for (const auto& v : report.verdicts)
    std::printf("  %-28s measured %.6e  tol %.6e  %s\n", v.name.c_str(), v.measured,
                v.tol, v.pass ? "ok" : "FAIL");
}

int run_one(flowlab::ExperimentConfig cfg, double tol_scale, const std::string& out_dir,
            bool quiet = false) {
  cfg.tol_scale *= tol_scale;
  flowlab::RunReport report = flowlab::run_experiment(cfg);
  flowlab::write_report_files(report, out_dir);
  if (!quiet) {
    std::printf("%s %s: %d points, dt %.6g, %zu rows -> %s\n", report.backend.c_str(),
                report.flow_name.c_str(), report.grid_n, report.dt, report.rows(),
                (std::filesystem::path(out_dir) / report.out_csv).c_str());
    print_verdicts(report);
  }
  return report.passed() ? 0 : 1;
}

int cmd_run(const std::string& config_path, double tol_scale, const std::string& out_dir) {
  return run_one(flowlab::load_config_file(config_path), tol_scale, out_dir);
}

int cmd_verify(const std::string& suite, double tol_scale, uint64_t seed,
               const std::string& out_dir) {
  auto results = flowlab::verify::run_checks(suite, tol_scale, seed);
  int bad = 0;
  for (const auto& r : results) {
    std::printf("%-10s %-34s measured %.6e  tol %.6e  %s\n", r.suite.c_str(),
                r.name.c_str(), r.measured, r.tol, r.pass ? "ok" : "FAIL");
    if (!r.pass) ++bad;
  }
  std::printf("%zu checks, %d failed\n", results.size(), bad);
  if (!out_dir.empty()) {
    nlohmann::json j;
    j["suite"] = suite;
    j["passed"] = bad == 0;
    j["checks"] = nlohmann::json::array();
    for (const auto& r : results)
      j["checks"].push_back({{"suite", r.suite},
                             {"check", r.name},
                             {"measured", r.measured},
                             {"tolerance", r.tol},
                             {"pass", r.pass}});
    std::filesystem::path dir(out_dir);
    std::filesystem::create_directories(dir);
    std::ofstream out(dir / ("verify_" + suite + ".json"), std::ios::binary);
    out << j.dump(2) << "\n";
    if (!out) throw flowlab::ConfigError("cannot write verify report under " + out_dir);
  }
  return bad ? 1 : 0;
}

int cmd_sweep(const std::string& config_path, const std::string& param, double tol_scale,
              const std::string& out_dir) {
  auto eq = param.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 >= param.size())
    throw flowlab::ConfigError("--param expects key=v1,v2,...");
  std::string key = param.substr(0, eq);
  std::vector<std::string> values;
  {
    std::string rest = param.substr(eq + 1);
    size_t pos = 0;
    while (pos <= rest.size()) {
      size_t comma = rest.find(',', pos);
      if (comma == std::string::npos) comma = rest.size();
      std::string v = rest.substr(pos, comma - pos);
      if (v.empty()) throw flowlab::ConfigError("--param has an empty value");
      values.push_back(v);
      pos = comma + 1;
    }
  }
  flowlab::ExperimentConfig base = flowlab::load_config_file(config_path);
  int bad = 0;
  for (const auto& v : values) {
    flowlab::ExperimentConfig cfg = base;
    flowlab::apply_override(cfg, key + "=" + v);
    flowlab::validate_config(cfg);
    std::string leaf = key + "=" + v;
    for (auto& ch : leaf)
      if (ch == '/') ch = '_';
    std::string dir = (std::filesystem::path(out_dir) / leaf).string();
    int rc = run_one(std::move(cfg), tol_scale, dir, true);
    std::printf("sweep %s=%s -> %s  %s\n", key.c_str(), v.c_str(), dir.c_str(),
                rc == 0 ? "ok" : "FAIL");
    if (rc != 0) ++bad;
  }
  std::printf("sweep: %zu runs, %d failed\n", values.size(), bad);
  return bad ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"flow laboratory: evolving-metric entropy and eigenvalue experiments"};
  app.require_subcommand(1);
  app.fallthrough();  // accept the global flags after the subcommand too

  std::string out_dir_flag = "out";
  double tol_scale = 1.0;
  uint64_t seed = 0;
  app.add_option("--out-dir", out_dir_flag, "directory for CSV/JSON outputs");
  app.add_option("--tol-scale", tol_scale, "multiply every tolerance")
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "perturb the randomized verification probes");

  std::string config_path, suite, param;
  CLI::App* run = app.add_subcommand("run", "execute one configured experiment");
  run->add_option("config", config_path, "config file (key = value lines)")->required();

  CLI::App* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("suite", suite, "geometry|flows|heat|entropy|spectrum|all")
      ->required();

  CLI::App* sweep = app.add_subcommand("sweep", "run a config across parameter values");
  sweep->add_option("config", config_path, "config file")->required();
  sweep->add_option("--param", param, "key=v1,v2,... override per run")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // keep command line mistakes inside the documented exit code set
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    std::string out_dir = resolve_out_dir(out_dir_flag);
    if (run->parsed()) return cmd_run(config_path, tol_scale, out_dir);
    if (verify->parsed()) return cmd_verify(suite, tol_scale, seed, out_dir);
    return cmd_sweep(config_path, param, tol_scale, out_dir);
  } catch (const flowlab::NumericError& e) {
    std::fprintf(stderr, "numerical failure at t = %.6g: %s\n", e.time, e.what());
    return 3;
  } catch (const flowlab::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
