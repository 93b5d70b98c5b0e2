#pragma once

#include <string>

#include "flowlab/runner.hpp"

namespace flowlab {

// Per-time table, 17 significant digits, NaN cells empty. Same bytes for the
// same config.
std::string render_csv(const RunReport& r);

// Verdicts plus the provenance block.
std::string render_json(const RunReport& r);

// Writes out_dir/<csv name> and out_dir/<json name>, creating directories.
void write_report_files(const RunReport& r, const std::string& out_dir);

}  // namespace flowlab
