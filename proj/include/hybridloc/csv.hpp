#pragma once

#include <cstddef>
#include <fstream>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace hybridloc::csv {

/// Shortest decimal text that parses back to the identical double.
std::string format_double(double value);

/// Fixed-point text with `decimals` digits after the point.
std::string format_fixed(double value, int decimals);

/// Splits on commas. Quoting is not supported; none of the formats need it.
std::vector<std::string_view> split(std::string_view line);

/// Line-oriented reader that tracks 1-based line numbers for diagnostics.
class Reader {
 public:
  Reader(std::istream& in, std::string source);

  /// Consumes the first line and requires it to equal `header` exactly.
  void expect_header(std::string_view header);

  /// Advances to the next non-empty line. Returns false at end of input.
  bool next();

  const std::vector<std::string_view>& fields() const { return fields_; }
  std::size_t line() const { return line_no_; }
  const std::string& source() const { return source_; }

  /// Requires exactly `count` fields on the current row.
  void expect_fields(std::size_t count) const;

  double number(std::size_t index, std::string_view name) const;
  long long integer(std::size_t index, std::string_view name) const;
  std::string text(std::size_t index, std::string_view name) const;

  [[noreturn]] void fail(const std::string& message) const;

 private:
  std::istream& in_;
  std::string source_;
  std::string line_;
  std::vector<std::string_view> fields_;
  std::size_t line_no_ = 0;
};

/// Opens a file for reading or throws ParseError naming the path.
std::ifstream open_input(const std::string& path);

/// Opens a file for binary writing (LF line endings) or throws.
std::ofstream open_output(const std::string& path);

}  // namespace hybridloc::csv
