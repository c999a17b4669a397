#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace crossway {

// Flat "dotted.key = value" text format used for the scenario geometry file
// and for run configuration. Full-line comments start with '#'; blank lines
// are ignored. Keys are unique. Reads are tracked so callers can reject
// unknown keys after consuming everything they understand.
class FlatKv {
 public:
  static FlatKv parse(std::string_view text);
  static FlatKv parse_file(const std::filesystem::path& path);

  bool has(const std::string& key) const;
  // All getters throw std::runtime_error naming the key on absence or on a
  // malformed value.
  std::string get(const std::string& key) const;
  std::string get_or(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  int get_int(const std::string& key) const;
  bool get_bool(const std::string& key) const;

  void set(const std::string& key, std::string value);

  // Keys in file order.
  std::vector<std::string> keys() const;
  // Keys never accessed through any getter; used to reject unknown keys.
  std::vector<std::string> unread_keys() const;

  std::string to_text() const;

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
  mutable std::set<std::string> read_;

  const std::string* find(const std::string& key) const;
};

// Splits "a, b, c" into trimmed tokens; empty input gives an empty list.
std::vector<std::string> split_list(std::string_view text, char sep = ',');
std::string trim(std::string_view s);

}  // namespace crossway
