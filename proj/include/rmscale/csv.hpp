#pragma once

#include <fstream>
#include <ostream>
#include <string>
#include <vector>

namespace rmscale {

// All tabular text output goes through these helpers so the formatting
// rules live in one place: 6 significant digits, '#' comment lines before
// the mandatory header row.

std::string fmt6(double v);

class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path);  // opens the file
  explicit CsvWriter(std::ostream& os);         // borrows an open stream

  void comment(const std::string& line);                 // "# <line>\n"
  void header(const std::vector<std::string>& names);    // once, before rows
  void row(const std::vector<std::string>& cells);

  // True once the stream failed; callers surface it as an I/O error.
  bool ok() const { return static_cast<bool>(*out_); }

 private:
  std::ofstream file_;
  std::ostream* out_;
  bool header_written_ = false;
};

}  // namespace rmscale
