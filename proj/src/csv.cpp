#include "hybridloc/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <system_error>

#include "hybridloc/error.hpp"

namespace hybridloc::csv {

std::string format_double(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc{}) throw Error("cannot format number");
  std::string out(buf, end);
  // Normalize negative zero so identical inputs always produce identical bytes.
  if (out == "-0") out = "0";
  return out;
}

std::string format_fixed(double value, int decimals) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value,
                                 std::chars_format::fixed, decimals);
  if (ec != std::errc{}) throw Error("cannot format number");
  return std::string(buf, end);
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return out;
}

Reader::Reader(std::istream& in, std::string source)
    : in_(in), source_(std::move(source)) {}

void Reader::expect_header(std::string_view header) {
  if (!std::getline(in_, line_)) {
    line_no_ = 1;
    fail("empty file, expected header '" + std::string(header) + "'");
  }
  ++line_no_;
  if (!line_.empty() && line_.back() == '\r') line_.pop_back();
  if (line_ != header) {
    fail("bad header '" + line_ + "', expected '" + std::string(header) + "'");
  }
}

bool Reader::next() {
  while (std::getline(in_, line_)) {
    ++line_no_;
    if (!line_.empty() && line_.back() == '\r') line_.pop_back();
    if (line_.empty()) continue;
    fields_ = split(line_);
    return true;
  }
  fields_.clear();
  return false;
}

void Reader::expect_fields(std::size_t count) const {
  if (fields_.size() != count) {
    fail("expected " + std::to_string(count) + " fields, found " +
         std::to_string(fields_.size()));
  }
}

double Reader::number(std::size_t index, std::string_view name) const {
  std::string_view field = fields_.at(index);
  double value = 0.0;
  auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size() ||
      !std::isfinite(value)) {
    fail("field '" + std::string(name) + "': not a finite number: '" +
         std::string(field) + "'");
  }
  return value;
}

long long Reader::integer(std::size_t index, std::string_view name) const {
  std::string_view field = fields_.at(index);
  long long value = 0;
  auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size()) {
    fail("field '" + std::string(name) + "': not an integer: '" +
         std::string(field) + "'");
  }
  return value;
}

std::string Reader::text(std::size_t index, std::string_view name) const {
  std::string_view field = fields_.at(index);
  if (field.empty()) fail("field '" + std::string(name) + "' is empty");
  return std::string(field);
}

void Reader::fail(const std::string& message) const {
  throw ParseError(message, source_, line_no_);
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open input file", path);
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ParseError("cannot open output file", path);
  return out;
}

}  // namespace hybridloc::csv
