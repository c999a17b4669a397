#include "crossway/csv.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace crossway {

std::string format_metric(double v) {
  if (!std::isfinite(v)) {
    throw std::runtime_error("refusing to write a non-finite value");
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& path,
                     std::vector<std::string> columns)
    : path_(path), out_(path, std::ios::trunc), columns_(columns.size()) {
  if (!out_) {
    throw std::runtime_error("cannot write '" + path.string() + "'");
  }
  if (columns.empty()) {
    throw std::runtime_error("a csv needs at least one column");
  }
  write_line(columns);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_) {
    throw std::runtime_error("csv row width " + std::to_string(cells.size()) +
                             " does not match the header of '" + path_.string() +
                             "'");
  }
  write_line(cells);
}

void CsvWriter::write_line(const std::vector<std::string>& cells) {
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) line += ',';
    const std::string& cell = cells[i];
    if (cell.find_first_of(",\"\n") != std::string::npos) {
      line += '"';
      for (char c : cell) {
        if (c == '"') line += '"';
        line += c;
      }
      line += '"';
    } else {
      line += cell;
    }
  }
  line += '\n';
  out_ << line;
  if (!out_) {
    throw std::runtime_error("short write to '" + path_.string() + "'");
  }
}

void CsvWriter::close() {
  if (out_.is_open()) {
    out_.flush();
    out_.close();
    if (out_.fail()) {
      throw std::runtime_error("failed to finish '" + path_.string() + "'");
    }
  }
}

}  // namespace crossway
