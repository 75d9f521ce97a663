#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace hybridloc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed text input: DMS strings, CSV rows, JSON documents.
/// `source` and `line` are empty/zero when the text did not come from a file.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& message, std::string source = {},
                      std::size_t line = 0)
      : Error(format(message, source, line)),
        detail_(message),
        source_(std::move(source)),
        line_(line) {}

  const std::string& detail() const noexcept { return detail_; }
  const std::string& source() const noexcept { return source_; }
  std::size_t line() const noexcept { return line_; }

 private:
  static std::string format(const std::string& message,
                            const std::string& source, std::size_t line) {
    if (source.empty()) return message;
    if (line == 0) return source + ": " + message;
    return source + ":" + std::to_string(line) + ": " + message;
  }

  std::string detail_;
  std::string source_;
  std::size_t line_;
};

/// Degenerate geometry (coincident reference coordinates, zero-length walls,
/// self-intersecting polygons).
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// Data that parses but contradicts itself (conflicting survey positions,
/// duplicate keys, invalid model parameters).
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

/// Sensor epochs presented out of time order.
class SequencingError : public ConsistencyError {
 public:
  SequencingError(const std::string& message, std::size_t epoch_index)
      : ConsistencyError(message), epoch_index_(epoch_index) {}

  std::size_t epoch_index() const noexcept { return epoch_index_; }

 private:
  std::size_t epoch_index_;
};

/// A fix whose epoch has no ground-truth counterpart.
class AlignmentError : public ConsistencyError {
 public:
  AlignmentError(const std::string& message, long long epoch_ms)
      : ConsistencyError(message), epoch_ms_(epoch_ms) {}

  long long epoch_ms() const noexcept { return epoch_ms_; }

 private:
  long long epoch_ms_;
};

}  // namespace hybridloc
