#pragma once

#include <string>
#include <vector>

namespace pmpqoc {

// RFC-4180 table of doubles, 17 significant digits.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::string to_string() const;
};

std::string format_double(double x);

}  // namespace pmpqoc
