#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace crossway {

/// Fixed "%.6f" rendering used by every CSV metric. Throws
/// std::runtime_error on NaN or infinity so bad values never reach disk.
std::string format_metric(double v);

// Line-at-a-time CSV emitter with a fixed column count. Cells holding
// commas, quotes, or newlines are quoted.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, std::vector<std::string> columns);

  void row(const std::vector<std::string>& cells);
  void close();
  const std::filesystem::path& path() const { return path_; }

 private:
  void write_line(const std::vector<std::string>& cells);

  std::filesystem::path path_;
  std::ofstream out_;
  std::size_t columns_;
};

}  // namespace crossway
