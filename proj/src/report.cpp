#include "flowlab/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "flowlab/errors.hpp"
#include "json.hpp"

namespace flowlab {

namespace {

std::string fmt17(double x) {
  if (std::isnan(x)) return "";
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw ConfigError("cannot create directory " + path.parent_path().string());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
  if (!out) throw ConfigError("short write to " + path.string());
}

}  // namespace

std::string render_csv(const RunReport& r) {
  std::string out;
  for (size_t c = 0; c < r.header.size(); ++c) {
    if (c) out += ", ";
    out += r.header[c];
  }
  out += "\n";
  for (size_t i = 0; i < r.rows(); ++i) {
    for (size_t c = 0; c < r.columns.size(); ++c) {
      if (c) out += ", ";
      out += fmt17(r.columns[c][i]);
    }
    out += "\n";
  }
  return out;
}

std::string render_json(const RunReport& r) {
  nlohmann::json j;
  j["passed"] = r.passed();
  j["verdicts"] = nlohmann::json::array();
  for (const auto& v : r.verdicts) {
    j["verdicts"].push_back({{"check", v.name},
                             {"measured", v.measured},
                             {"tolerance", v.tol},
                             {"pass", v.pass}});
  }
  nlohmann::json prov;
  prov["build_id"] = r.build_id;
  prov["backend"] = r.backend;
  prov["flow"] = r.flow_name;
  prov["grid_n"] = r.grid_n;
  prov["dt"] = r.dt;
  prov["steps"] = r.steps;
  prov["stride"] = r.stride;
  prov["rows"] = r.rows();
  prov["config"] = r.config_echo;
  j["provenance"] = prov;
  return j.dump(2) + "\n";
}

void write_report_files(const RunReport& r, const std::string& out_dir) {
  std::filesystem::path base(out_dir.empty() ? "." : out_dir);
  write_text(base / r.out_csv, render_csv(r));
  write_text(base / r.out_json, render_json(r));
}

}  // namespace flowlab
