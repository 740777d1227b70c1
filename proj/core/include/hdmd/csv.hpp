#pragma once

#include <cstddef>
#include <istream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hdmd::csv {

/// Thrown for malformed CSV input. `line()` is 1-based and counts the header.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Shortest round-trip representation; identical inputs give identical bytes.
std::string format(double value);

std::vector<std::string> split(std::string_view line, char sep = ',');

double parse_double(std::string_view field, std::size_t line);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

// Reads a header line plus numeric rows. Blank lines are skipped; every row must
// have as many fields as the header.
Table read_numeric(std::istream& in);

}  // namespace hdmd::csv
