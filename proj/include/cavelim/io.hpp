#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "cavelim/model.hpp"

#include <nlohmann/json.hpp>

namespace cavelim {

// Shortest decimal string that parses back to exactly the same double.
// Keeps repeated runs byte-identical on one platform.
std::string format_double(double x);

// Rectangular text table rendered as CSV. Cells are stored pre-formatted
// so that producers control the exact bytes.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> cells);
  void add_numeric_row(const std::vector<double>& values);
  // Leading '#'-comment lines, then the header row, then data.
  std::string to_csv(const std::vector<std::string>& comments = {}) const;
};

// Write via a temp file in the same directory followed by rename, so readers
// never observe a partial file.
void write_file_atomic(const std::filesystem::path& path,
                       const std::string& contents);

nlohmann::json system_spec_json(const SystemSpec& spec);

// Run manifest: the one place timestamps are allowed. Data files reference
// the manifest by name instead of embedding run metadata.
nlohmann::json make_manifest(const std::string& subcommand,
                             const nlohmann::json& config_snapshot,
                             const std::vector<std::string>& outputs);

}  // namespace cavelim
