#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "meanfield/common.hpp"

namespace meanfield::cli {

/// Flat `[section]` / `key = value` store. Unknown keys are rejected against
/// the documented schema so experiment manifests stay diffable.
class Config {
 public:
  static Config from_string(const std::string& text);
  static Config from_file(const std::string& path);

  void set(const std::string& section_key, const std::string& value);  // "section.key"
  bool has(const std::string& section_key) const;

  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<double> get_double_list(const std::string& key,
                                      std::vector<double> fallback) const;

  /// Canonical serialization (sorted sections/keys) used for content hashes.
  std::string canonical() const;
  std::uint64_t content_hash() const;

  struct SchemaEntry {
    std::string key;  // "section.key"
    std::string type; // string | double | int | bool | double_list
    std::string doc;
  };
  static const std::vector<SchemaEntry>& schema();

 private:
  void validate_key(const std::string& key) const;
  std::map<std::string, std::string> values_;
};

}  // namespace meanfield::cli
