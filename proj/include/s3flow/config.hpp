#pragma once

// Sectioned key = value configuration files. Every entry keeps its line
// number so that validation errors can point back into the file.

#include <filesystem>
#include <istream>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace s3flow {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ConfigEntry {
  std::string value;
  int line = 0;
};

struct ConfigSection {
  std::string kind;  // first word of the header, e.g. "scenario"
  std::string name;  // rest of the header
  int line = 0;
  std::map<std::string, ConfigEntry> entries;
};

struct ConfigFile {
  std::string path;
  std::vector<ConfigSection> sections;
};

/// Syntax: `# comment`, `[kind name]`, `key = value`. Blank lines ignored.
/// Errors are reported as "path:line: message".
ConfigFile parse_config(std::istream& in, const std::string& path);
ConfigFile parse_config_file(const std::filesystem::path& path);

/// Typed access with "path:line: key: message" diagnostics.
class SectionReader {
 public:
  SectionReader(const ConfigSection& section, std::string path);

  bool has(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  long long get_int(const std::string& key, long long fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<double> get_doubles(const std::string& key) const;
  std::vector<std::string> get_strings(const std::string& key) const;

  /// Throws for any key that was never queried.
  void reject_unused() const;

  [[noreturn]] void fail(const std::string& key, const std::string& message) const;

 private:
  const ConfigEntry* find(const std::string& key) const;

  const ConfigSection& section_;
  std::string path_;
  mutable std::map<std::string, bool> used_;
};

}  // namespace s3flow
