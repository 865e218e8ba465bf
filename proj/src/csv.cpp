#include "rmscale/csv.hpp"

#include <cstdio>
#include <stdexcept>

namespace rmscale {

std::string fmt6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

CsvWriter::CsvWriter(const std::string& path) : file_(path), out_(&file_) {
  if (!file_) throw std::runtime_error("cannot open for writing: " + path);
}

CsvWriter::CsvWriter(std::ostream& os) : out_(&os) {}

void CsvWriter::comment(const std::string& line) {
  if (header_written_)
    throw std::logic_error("csv comments must precede the header");
  *out_ << "# " << line << "\n";
}

void CsvWriter::header(const std::vector<std::string>& names) {
  if (header_written_) throw std::logic_error("csv header written twice");
  header_written_ = true;
  for (size_t k = 0; k < names.size(); ++k)
    *out_ << names[k] << (k + 1 < names.size() ? "," : "\n");
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (!header_written_) throw std::logic_error("csv row before header");
  for (size_t k = 0; k < cells.size(); ++k)
    *out_ << cells[k] << (k + 1 < cells.size() ? "," : "\n");
}

}  // namespace rmscale
