#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace symrl {

// Flat key=value configuration: one `key = value` per line, '#' starts a
// comment, later command-line overrides replace file values. Accessors
// record which keys were read so unknown (misspelled) keys can be rejected
// after parsing.
class Config {
 public:
  static Config parse_file(const std::string& path);
  static Config parse_text(const std::string& text, const std::string& origin = "<text>");

  // "key=value" form used by --set; replaces any existing value.
  void apply_override(const std::string& assignment);

  bool has(const std::string& key) const { return values_.count(key) > 0; }

  std::string get_string(const std::string& key, const std::string& fallback);
  std::string require_string(const std::string& key);
  std::int64_t get_int(const std::string& key, std::int64_t fallback);
  double get_double(const std::string& key, double fallback);
  bool get_bool(const std::string& key, bool fallback);
  std::vector<int> get_int_list(const std::string& key, const std::vector<int>& fallback);

  // Keys present but never read by any accessor.
  std::vector<std::string> unread_keys() const;

  // Sorted canonical "key=value" lines (for manifests and hashing).
  std::vector<std::string> canonical_lines() const;
  std::uint64_t fingerprint() const;  // FNV-1a over the canonical lines

 private:
  std::map<std::string, std::string> values_;
  mutable std::map<std::string, bool> read_;
};

}  // namespace symrl
