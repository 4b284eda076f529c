#include "s3flow/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace s3flow {
namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

ConfigFile parse_config(std::istream& in, const std::string& path) {
  ConfigFile file;
  file.path = path;
  std::string raw;
  int lineno = 0;
  auto error = [&](const std::string& msg) {
    return ConfigError(path + ":" + std::to_string(lineno) + ": " + msg);
  };
  while (std::getline(in, raw)) {
    ++lineno;
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw error("unterminated section header");
      const std::string header = trim(line.substr(1, line.size() - 2));
      const std::size_t space = header.find_first_of(" \t");
      ConfigSection s;
      s.kind = header.substr(0, space);
      s.name = space == std::string::npos ? "" : trim(header.substr(space));
      s.line = lineno;
      if (s.kind.empty() || s.name.empty()) throw error("section header needs a kind and a name, e.g. [scenario demo]");
      for (const ConfigSection& other : file.sections) {
        if (other.kind == s.kind && other.name == s.name) {
          throw error("duplicate " + s.kind + " '" + s.name + "' (first defined on line " +
                      std::to_string(other.line) + ")");
        }
      }
      file.sections.push_back(std::move(s));
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) throw error("expected 'key = value' or a [section] header");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw error("empty key");
    if (file.sections.empty()) throw error("entry '" + key + "' outside of any section");
    auto& entries = file.sections.back().entries;
    if (entries.count(key) != 0) {
      throw error("duplicate key '" + key + "' (first set on line " + std::to_string(entries[key].line) + ")");
    }
    entries[key] = ConfigEntry{value, lineno};
  }
  return file;
}

ConfigFile parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open config file");
  return parse_config(in, path.string());
}

SectionReader::SectionReader(const ConfigSection& section, std::string path)
    : section_(section), path_(std::move(path)) {}

const ConfigEntry* SectionReader::find(const std::string& key) const {
  used_[key] = true;
  const auto it = section_.entries.find(key);
  return it == section_.entries.end() ? nullptr : &it->second;
}

void SectionReader::fail(const std::string& key, const std::string& message) const {
  const auto it = section_.entries.find(key);
  const int line = it == section_.entries.end() ? section_.line : it->second.line;
  throw ConfigError(path_ + ":" + std::to_string(line) + ": " + key + ": " + message);
}

bool SectionReader::has(const std::string& key) const { return find(key) != nullptr; }

std::string SectionReader::get_string(const std::string& key, const std::string& fallback) const {
  const ConfigEntry* e = find(key);
  return e ? e->value : fallback;
}

double SectionReader::get_double(const std::string& key, double fallback) const {
  const ConfigEntry* e = find(key);
  if (!e) return fallback;
  try {
    std::size_t used = 0;
    const double v = std::stod(e->value, &used);
    if (used == e->value.size()) return v;
  } catch (const std::exception&) {
  }
  fail(key, "expected a number, got '" + e->value + "'");
}

long long SectionReader::get_int(const std::string& key, long long fallback) const {
  const ConfigEntry* e = find(key);
  if (!e) return fallback;
  try {
    std::size_t used = 0;
    const long long v = std::stoll(e->value, &used);
    if (used == e->value.size()) return v;
  } catch (const std::exception&) {
  }
  fail(key, "expected an integer, got '" + e->value + "'");
}

bool SectionReader::get_bool(const std::string& key, bool fallback) const {
  const ConfigEntry* e = find(key);
  if (!e) return fallback;
  if (e->value == "true" || e->value == "yes" || e->value == "1") return true;
  if (e->value == "false" || e->value == "no" || e->value == "0") return false;
  fail(key, "expected true or false, got '" + e->value + "'");
}

std::vector<double> SectionReader::get_doubles(const std::string& key) const {
  const ConfigEntry* e = find(key);
  std::vector<double> out;
  if (!e) return out;
  for (const std::string& item : split_list(e->value)) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      fail(key, "expected a comma-separated list of numbers, got '" + item + "'");
    }
  }
  return out;
}

std::vector<std::string> SectionReader::get_strings(const std::string& key) const {
  const ConfigEntry* e = find(key);
  return e ? split_list(e->value) : std::vector<std::string>{};
}

void SectionReader::reject_unused() const {
  for (const auto& [key, entry] : section_.entries) {
    if (!used_.count(key)) fail(key, "key is unknown or not used by [" + section_.kind + " " + section_.name + "]");
  }
}

}  // namespace s3flow
