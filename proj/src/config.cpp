#include "symrl/config.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace symrl {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

[[noreturn]] void fail(const std::string& msg) { throw std::runtime_error("config: " + msg); }

}  // namespace

Config Config::parse_text(const std::string& text, const std::string& origin) {
  Config config;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      fail(origin + ":" + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) fail(origin + ":" + std::to_string(line_no) + ": empty key");
    if (!config.values_.emplace(key, value).second)
      fail(origin + ":" + std::to_string(line_no) + ": duplicate key '" + key + "'");
  }
  return config;
}

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_text(buffer.str(), path);
}

void Config::apply_override(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) fail("override '" + assignment + "' is not key=value");
  const std::string key = trim(assignment.substr(0, eq));
  const std::string value = trim(assignment.substr(eq + 1));
  if (key.empty()) fail("override '" + assignment + "' has an empty key");
  values_[key] = value;
}

std::string Config::get_string(const std::string& key, const std::string& fallback) {
  read_[key] = true;
  auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

std::string Config::require_string(const std::string& key) {
  read_[key] = true;
  auto it = values_.find(key);
  if (it == values_.end()) fail("missing required key '" + key + "'");
  return it->second;
}

std::int64_t Config::get_int(const std::string& key, std::int64_t fallback) {
  read_[key] = true;
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  errno = 0;
  char* end = nullptr;
  const long long value = std::strtoll(it->second.c_str(), &end, 10);
  if (errno != 0 || end == it->second.c_str() || *end != '\0')
    fail("key '" + key + "' is not an integer: '" + it->second + "'");
  return value;
}

double Config::get_double(const std::string& key, double fallback) {
  read_[key] = true;
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  errno = 0;
  char* end = nullptr;
  const double value = std::strtod(it->second.c_str(), &end);
  if (errno != 0 || end == it->second.c_str() || *end != '\0')
    fail("key '" + key + "' is not a number: '" + it->second + "'");
  return value;
}

bool Config::get_bool(const std::string& key, bool fallback) {
  read_[key] = true;
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  const std::string& v = it->second;
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  fail("key '" + key + "' is not a boolean: '" + v + "'");
}

std::vector<int> Config::get_int_list(const std::string& key, const std::vector<int>& fallback) {
  read_[key] = true;
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  std::vector<int> out;
  std::istringstream in(it->second);
  std::string item;
  while (std::getline(in, item, ',')) {
    errno = 0;
    char* end = nullptr;
    const std::string t = trim(item);
    const long value = std::strtol(t.c_str(), &end, 10);
    if (errno != 0 || end == t.c_str() || *end != '\0')
      fail("key '" + key + "' is not a comma-separated integer list: '" + it->second + "'");
    out.push_back(static_cast<int>(value));
  }
  if (out.empty()) fail("key '" + key + "' is an empty list");
  return out;
}

std::vector<std::string> Config::unread_keys() const {
  std::vector<std::string> out;
  for (const auto& [key, value] : values_) {
    auto it = read_.find(key);
    if (it == read_.end() || !it->second) out.push_back(key);
  }
  return out;
}

std::vector<std::string> Config::canonical_lines() const {
  std::vector<std::string> lines;
  lines.reserve(values_.size());
  for (const auto& [key, value] : values_) lines.push_back(key + "=" + value);
  return lines;
}

std::uint64_t Config::fingerprint() const {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (const auto& line : canonical_lines()) {
    for (char c : line) {
      hash ^= static_cast<unsigned char>(c);
      hash *= 0x100000001b3ull;
    }
    hash ^= '\n';
    hash *= 0x100000001b3ull;
  }
  return hash;
}

}  // namespace symrl
