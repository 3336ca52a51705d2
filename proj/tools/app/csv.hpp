#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace ledgerage::cli {

// 9 significant digits, '.' decimal point; inf and nan spelled out.
std::string format_number(double x);
std::string format_count(std::uint64_t n);

// A CSV report: optional '#' comment lines, a header row, then data rows.
struct CsvTable {
  std::vector<std::string> comments;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void write(std::ostream& out) const;
  std::size_t column(const std::string& name) const;
  double number(std::size_t row, const std::string& name) const;
};

CsvTable read_csv(std::istream& in);

}  // namespace ledgerage::cli
