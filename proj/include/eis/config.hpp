#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

namespace eis {

/// Flat `key = value` run configuration. Lines starting with '#' and blank
/// lines are skipped; whitespace around keys and values is trimmed.
/// Unknown keys are kept so callers can reject them explicitly.
class RunConfig {
 public:
  RunConfig() = default;
  static RunConfig parse_file(const std::filesystem::path& path);
  static RunConfig parse_text(const std::string& text);

  bool has(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;

  std::optional<double> maybe_double(const std::string& key) const;
  std::optional<std::int64_t> maybe_int(const std::string& key) const;

  void set(const std::string& key, const std::string& value);
  const std::map<std::string, std::string>& entries() const { return entries_; }

 private:
  std::map<std::string, std::string> entries_;
};

}  // namespace eis
