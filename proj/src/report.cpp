#include "l2control/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "l2control/errors.hpp"

namespace l2control {

std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

nlohmann::ordered_json RunReport::to_json() const {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["tool_version"] = tool_version;
  j["parameters"] = parameters;
  j["results"] = results;
  j["wall_time_ms"] = wall_time_ms;
  return j;
}

namespace {

void dump_section(std::ostringstream& os, const char* title, const nlohmann::ordered_json& obj) {
  os << title << ":\n";
  for (const auto& [key, value] : obj.items())
    os << "  " << key << ": " << (value.is_string() ? value.get<std::string>() : value.dump())
       << "\n";
}

}  // namespace

std::string RunReport::to_text() const {
  std::ostringstream os;
  os << "command: " << command << "\n";
  os << "tool_version: " << tool_version << "\n";
  dump_section(os, "parameters", parameters);
  dump_section(os, "results", results);
  os << "wall_time_ms: " << format_full(wall_time_ms) << "\n";
  return os.str();
}

std::string trajectory_csv(const std::vector<TrajectoryRow>& rows, bool per_block) {
  std::ostringstream os;
  os << "t,total_norm";
  if (per_block && !rows.empty())
    for (std::size_t k = 0; k < rows.front().block_norms.size(); ++k) os << ",block_" << k;
  os << "\n";
  for (const TrajectoryRow& row : rows) {
    os << format_full(row.t) << "," << format_full(row.total_norm);
    if (per_block)
      for (double bn : row.block_norms) os << "," << format_full(bn);
    os << "\n";
  }
  return os.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidInput("cannot write " + tmp.string());
    out << text;
    if (!out.flush()) throw InvalidInput("short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace l2control
