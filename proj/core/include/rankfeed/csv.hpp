#ifndef RANKFEED_CSV_HPP_
#define RANKFEED_CSV_HPP_

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace rankfeed {

// Shortest decimal text that parses back to the same double (%.17g).
std::string format_double(double x);

// Splits on commas; no quoting support (all files here are numeric).
std::vector<std::string> split_csv_line(std::string_view line);

// Strict numeric cell parse; throws Error naming `context` on failure.
double parse_double(std::string_view cell, std::string_view context = {});
long long parse_integer(std::string_view cell, std::string_view context = {});

std::string trim(std::string_view s);

// Reads the next non-empty line (stripping a trailing '\r'); false at EOF.
bool read_csv_line(std::istream& in, std::string& line);

template <typename Range>
std::string join_doubles(const Range& values) {
  std::string out;
  bool first = true;
  for (double v : values) {
    if (!first) out += ',';
    out += format_double(v);
    first = false;
  }
  return out;
}

}  // namespace rankfeed

#endif  // RANKFEED_CSV_HPP_
