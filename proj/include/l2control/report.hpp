#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace l2control {

// Outcome record for one CLI invocation.  Everything in it is reproducible
// bit-for-bit from the scenario bytes plus the resolved flags and seed.
struct RunReport {
  std::string command;
  std::string tool_version;
  nlohmann::ordered_json parameters = nlohmann::ordered_json::object();
  nlohmann::ordered_json results = nlohmann::ordered_json::object();
  double wall_time_ms = 0.0;

  nlohmann::ordered_json to_json() const;
  std::string to_text() const;
};

struct TrajectoryRow {
  double t = 0.0;
  double total_norm = 0.0;
  std::vector<double> block_norms;  // present only when per-block output is on
};

// 17 significant digits, enough to round-trip a double exactly.
std::string format_full(double v);

std::string trajectory_csv(const std::vector<TrajectoryRow>& rows, bool per_block);

// Atomic write: temp file alongside the target, then rename.
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace l2control
