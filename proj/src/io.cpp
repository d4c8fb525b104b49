#include "cavelim/io.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace cavelim {

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

void Table::add_row(std::vector<std::string> cells) {
  if (cells.size() != columns.size())
    throw std::invalid_argument("Table: row width does not match header");
  rows.push_back(std::move(cells));
}

void Table::add_numeric_row(const std::vector<double>& values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(format_double(v));
  add_row(std::move(cells));
}

std::string Table::to_csv(const std::vector<std::string>& comments) const {
  std::ostringstream out;
  for (const auto& c : comments) out << "# " << c << "\n";
  for (std::size_t i = 0; i < columns.size(); ++i)
    out << columns[i] << (i + 1 < columns.size() ? "," : "");
  out << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      out << row[i] << (i + 1 < row.size() ? "," : "");
    out << "\n";
  }
  return out.str();
}

void write_file_atomic(const std::filesystem::path& path,
                       const std::string& contents) {
  namespace fs = std::filesystem;
  const fs::path dir = path.has_parent_path() ? path.parent_path() : ".";
  fs::create_directories(dir);
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string());
    out << contents;
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

nlohmann::json system_spec_json(const SystemSpec& spec) {
  auto vec3 = [](const Vec3& v) {
    return nlohmann::json::array({v.x(), v.y(), v.z()});
  };
  nlohmann::json positions = nlohmann::json::array();
  for (const auto& p : spec.ensemble_b.positions) positions.push_back(vec3(p));
  return nlohmann::json{
      {"cavity",
       {{"omega", spec.cavity.omega},
        {"kappa", spec.cavity.kappa},
        {"g0_a", spec.cavity.g0_a},
        {"g0_b", spec.cavity.g0_b},
        {"axis", vec3(spec.cavity.axis)}}},
      {"emitter_a",
       {{"omega", spec.emitter_a.omega},
        {"gamma", spec.emitter_a.gamma},
        {"position", vec3(spec.emitter_a.position)}}},
      {"ensemble_b",
       {{"omega", spec.ensemble_b.omega},
        {"gamma", spec.ensemble_b.gamma},
        {"positions", positions}}}};
}

namespace {

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

nlohmann::json make_manifest(const std::string& subcommand,
                             const nlohmann::json& config_snapshot,
                             const std::vector<std::string>& outputs) {
  return nlohmann::json{{"tool", "cavelim"},
                        {"version", CAVELIM_VERSION},
                        {"subcommand", subcommand},
                        {"timestamp", utc_timestamp()},
                        {"config", config_snapshot},
                        {"outputs", outputs}};
}

}  // namespace cavelim
