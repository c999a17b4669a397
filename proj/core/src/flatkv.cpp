#include "crossway/flatkv.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace crossway {

std::string trim(std::string_view s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t pos = text.find(sep, start);
    if (pos == std::string_view::npos) pos = text.size();
    std::string tok = trim(text.substr(start, pos - start));
    if (!tok.empty()) out.push_back(std::move(tok));
    start = pos + 1;
  }
  return out;
}

FlatKv FlatKv::parse(std::string_view text) {
  FlatKv kv;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string line = trim(text.substr(start, end - start));
    start = end + 1;
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error("line " + std::to_string(line_no) +
                               ": expected 'key = value', got '" + line + "'");
    }
    std::string key = trim(std::string_view(line).substr(0, eq));
    std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key.empty()) {
      throw std::runtime_error("line " + std::to_string(line_no) +
                               ": empty key");
    }
    if (kv.find(key) != nullptr) {
      throw std::runtime_error("line " + std::to_string(line_no) +
                               ": duplicate key '" + key + "'");
    }
    kv.entries_.emplace_back(std::move(key), std::move(value));
  }
  return kv;
}

FlatKv FlatKv::parse_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open '" + path.string() + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse(buf.str());
  } catch (const std::exception& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

const std::string* FlatKv::find(const std::string& key) const {
  for (const auto& [k, v] : entries_) {
    if (k == key) return &v;
  }
  return nullptr;
}

bool FlatKv::has(const std::string& key) const {
  // A presence probe, not a read: probed-but-never-fetched keys still show
  // up in unread_keys().
  return find(key) != nullptr;
}

std::string FlatKv::get(const std::string& key) const {
  if (const std::string* v = find(key)) {
    read_.insert(key);
    return *v;
  }
  throw std::runtime_error("missing key '" + key + "'");
}

std::string FlatKv::get_or(const std::string& key,
                           const std::string& fallback) const {
  if (const std::string* v = find(key)) {
    read_.insert(key);
    return *v;
  }
  return fallback;
}

double FlatKv::get_double(const std::string& key) const {
  std::string v = get(key);
  char* end = nullptr;
  double x = std::strtod(v.c_str(), &end);
  if (end == v.c_str() || *end != '\0') {
    throw std::runtime_error("key '" + key + "': not a number: '" + v + "'");
  }
  return x;
}

int FlatKv::get_int(const std::string& key) const {
  double x = get_double(key);
  int i = static_cast<int>(x);
  if (static_cast<double>(i) != x) {
    throw std::runtime_error("key '" + key + "': not an integer");
  }
  return i;
}

bool FlatKv::get_bool(const std::string& key) const {
  std::string v = get(key);
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw std::runtime_error("key '" + key + "': expected true/false");
}

void FlatKv::set(const std::string& key, std::string value) {
  for (auto& [k, v] : entries_) {
    if (k == key) {
      v = std::move(value);
      return;
    }
  }
  entries_.emplace_back(key, std::move(value));
}

std::vector<std::string> FlatKv::keys() const {
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const auto& [k, v] : entries_) out.push_back(k);
  return out;
}

std::vector<std::string> FlatKv::unread_keys() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : entries_) {
    if (!read_.count(k)) out.push_back(k);
  }
  return out;
}

std::string FlatKv::to_text() const {
  std::ostringstream os;
  for (const auto& [k, v] : entries_) os << k << " = " << v << '\n';
  return os.str();
}

}  // namespace crossway
