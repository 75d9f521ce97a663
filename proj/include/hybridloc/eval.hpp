#pragma once

#include <array>
#include <cstddef>
#include <istream>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hybridloc/geo.hpp"
#include "hybridloc/switcher.hpp"

namespace hybridloc::eval {

/// Upper edges of the half-open error buckets [0,1) [1,2) [2,4) [4,6) [6,8)
/// [8,inf), in meters.
inline constexpr std::array<double, 5> kBucketEdges{1.0, 2.0, 4.0, 6.0, 8.0};
inline constexpr std::size_t kBucketCount = kBucketEdges.size() + 1;

inline constexpr std::string_view kErrorsHeader = "epoch_ms,error_m";
inline constexpr std::string_view kCdfHeader = "threshold,fraction";

struct ErrorStats {
  std::array<std::size_t, kBucketCount> buckets{};
  std::array<double, kBucketCount> probabilities{};
  double average_m = 0.0;
  std::size_t n = 0;
  std::map<double, double> percent_below;  ///< threshold_m -> fraction in [0, 1]
};

struct EpochError {
  long long epoch_ms = 0;
  double error_m = 0.0;
};

/// Planar distance between each fix and the truth at the same epoch, in fix
/// order. Throws AlignmentError naming the first fix with no truth epoch.
std::vector<EpochError> per_fix_errors(std::span<const switcher::PositionFix> fixes,
                                       std::span<const geo::TimedPoint> truth);

std::vector<double> error_values(std::span<const EpochError> errors);

/// Bucket index for one error value.
std::size_t bucket_of(double error_m);

/// Throws ConsistencyError on an empty list or a negative / non-finite error.
ErrorStats summarize(std::span<const double> errors,
                     std::span<const double> thresholds = {});

/// Fraction of errors strictly below `threshold_m`.
double fraction_below(std::span<const double> errors, double threshold_m);

/// Full-precision JSON document.
std::string to_json(const ErrorStats& stats);

/// Text table in the layout of the classic outdoor-positioning summary:
/// ranges, occurrences, probabilities, then the average and thresholds.
std::string to_table(const ErrorStats& stats);

void write_errors(std::ostream& out, std::span<const EpochError> errors);
std::vector<EpochError> read_errors(std::istream& in, const std::string& source = {});
std::vector<EpochError> read_errors(const std::string& path);

/// Empirical CDF sampled every `step_m` from 0 up to the first threshold at
/// which every error lies below it.
void write_cdf(std::ostream& out, std::span<const double> errors, double step_m);

}  // namespace hybridloc::eval
