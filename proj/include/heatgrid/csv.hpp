#pragma once

#include <cstdio>
#include <string>

#include "heatgrid/io_util.hpp"

namespace heatgrid {

// Minimal CSV assembly; every table gets a header row and is written
// atomically on close. Number formatting is fixed so reruns are
// byte-identical.
class CsvWriter {
 public:
  explicit CsvWriter(std::string header) { buf_ = std::move(header) + "\n"; }

  CsvWriter& field(const std::string& s) {
    sep();
    buf_ += s;
    return *this;
  }
  CsvWriter& field(double v, const char* fmt = "%.10g") {
    char tmp[40];
    std::snprintf(tmp, sizeof tmp, fmt, v);
    return field(std::string(tmp));
  }
  CsvWriter& field(long long v) { return field(std::to_string(v)); }
  CsvWriter& field(int v) { return field(std::to_string(v)); }
  CsvWriter& field(unsigned v) { return field(std::to_string(v)); }

  void end_row() {
    buf_ += "\n";
    row_open_ = false;
    ++rows_;
  }

  std::size_t rows() const { return rows_; }
  const std::string& text() const { return buf_; }

  void write(const std::string& path) const { write_file_atomic(path, buf_); }

 private:
  void sep() {
    if (row_open_) buf_ += ",";
    row_open_ = true;
  }
  std::string buf_;
  bool row_open_ = false;
  std::size_t rows_ = 0;
};

}  // namespace heatgrid
