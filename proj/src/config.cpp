#include "cavelim/config.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <vector>

namespace cavelim {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct Entry {
  std::string value;
  int line = 0;
  bool used = false;
};

using Section = std::map<std::string, Entry>;

struct ParsedFile {
  std::string name;
  std::map<std::string, Section> sections;
  std::map<std::string, int> section_lines;
};

[[noreturn]] void fail(const std::string& name, int line,
                       const std::string& msg) {
  throw ConfigError(name + ":" + std::to_string(line) + ": " + msg);
}

ParsedFile read_entries(std::istream& in, const std::string& name) {
  ParsedFile out;
  out.name = name;
  std::string raw;
  std::string section;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        fail(name, line_no, "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) fail(name, line_no, "empty section name");
      if (out.sections.count(section))
        fail(name, line_no, "duplicate section [" + section + "]");
      out.sections[section] = {};
      out.section_lines[section] = line_no;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      fail(name, line_no, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) fail(name, line_no, "empty key");
    if (value.empty()) fail(name, line_no, "empty value for '" + key + "'");
    if (section.empty())
      fail(name, line_no, "key '" + key + "' outside any section");
    auto& sec = out.sections[section];
    if (sec.count(key))
      fail(name, line_no, "duplicate key '" + key + "' in [" + section + "]");
    sec[key] = Entry{value, line_no, false};
  }
  return out;
}

double parse_number(const std::string& name, int line,
                    const std::string& text) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto res = std::from_chars(begin, end, value);
  if (res.ec != std::errc{} || res.ptr != end)
    fail(name, line, "not a number: '" + text + "'");
  return value;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string part;
  std::istringstream ss(text);
  while (std::getline(ss, part, sep)) parts.push_back(part);
  return parts;
}

Vec3 parse_vec3(const std::string& name, int line, std::string text) {
  for (auto& c : text)
    if (c == ',') c = ' ';
  std::istringstream ss(text);
  std::vector<std::string> parts;
  std::string tok;
  while (ss >> tok) parts.push_back(tok);
  if (parts.size() != 3)
    fail(name, line, "expected three components, got '" + text + "'");
  return Vec3(parse_number(name, line, parts[0]),
              parse_number(name, line, parts[1]),
              parse_number(name, line, parts[2]));
}

class SectionReader {
 public:
  SectionReader(ParsedFile& file, const std::string& section)
      : file_(file), section_(section) {
    if (!file.sections.count(section))
      throw ConfigError(file.name + ": missing section [" + section + "]");
  }

  Entry& require(const std::string& key) {
    auto& sec = file_.sections[section_];
    const auto it = sec.find(key);
    if (it == sec.end())
      fail(file_.name, file_.section_lines[section_],
           "missing key '" + key + "' in [" + section_ + "]");
    it->second.used = true;
    return it->second;
  }

  Entry* optional(const std::string& key) {
    auto& sec = file_.sections[section_];
    const auto it = sec.find(key);
    if (it == sec.end()) return nullptr;
    it->second.used = true;
    return &it->second;
  }

  double number(const std::string& key) {
    const Entry& e = require(key);
    return parse_number(file_.name, e.line, e.value);
  }

  Vec3 vec3(const std::string& key) {
    const Entry& e = require(key);
    return parse_vec3(file_.name, e.line, e.value);
  }

 private:
  ParsedFile& file_;
  std::string section_;
};

}  // namespace

SystemSpec parse_system_config(std::istream& in, const std::string& name) {
  ParsedFile file = read_entries(in, name);

  const std::vector<std::string> known = {"cavity", "emitter_a", "ensemble_b"};
  for (const auto& [section, entries] : file.sections) {
    (void)entries;
    bool ok = false;
    for (const auto& k : known) ok = ok || section == k;
    if (!ok)
      fail(name, file.section_lines[section],
           "unknown section [" + section + "]");
  }

  SystemSpec spec;
  {
    SectionReader cav(file, "cavity");
    spec.cavity.omega = cav.number("omega");
    spec.cavity.kappa = cav.number("kappa");
    spec.cavity.g0_a = cav.number("g0_a");
    spec.cavity.g0_b = cav.number("g0_b");
    if (Entry* axis = cav.optional("axis"))
      spec.cavity.axis = parse_vec3(name, axis->line, axis->value);
  }
  {
    SectionReader ea(file, "emitter_a");
    spec.emitter_a.omega = ea.number("omega");
    spec.emitter_a.gamma = ea.number("gamma");
    spec.emitter_a.position = ea.vec3("position");
  }
  {
    SectionReader eb(file, "ensemble_b");
    spec.ensemble_b.omega = eb.number("omega");
    spec.ensemble_b.gamma = eb.number("gamma");
    const Entry& pos = eb.require("positions");
    for (const auto& part : split(pos.value, ';')) {
      const std::string entry = trim(part);
      if (entry.empty())
        fail(name, pos.line, "empty position entry");
      spec.ensemble_b.positions.push_back(parse_vec3(name, pos.line, entry));
    }
    if (spec.ensemble_b.positions.empty())
      fail(name, pos.line, "positions list is empty");
  }

  for (const auto& [section, entries] : file.sections)
    for (const auto& [key, entry] : entries)
      if (!entry.used)
        fail(name, entry.line,
             "unknown key '" + key + "' in [" + section + "]");

  return spec;
}

SystemSpec load_system_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  return parse_system_config(in, path);
}

}  // namespace cavelim
