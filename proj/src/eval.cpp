#include "hybridloc/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "hybridloc/csv.hpp"
#include "hybridloc/error.hpp"
#include "hybridloc/planar.hpp"

namespace hybridloc::eval {

namespace {

std::string range_label(std::size_t bucket) {
  auto edge = [](double v) { return csv::format_double(v); };
  if (bucket == 0) return "0~" + edge(kBucketEdges[0]);
  if (bucket == kBucketCount - 1) return edge(kBucketEdges.back()) + "~";
  return edge(kBucketEdges[bucket - 1]) + "~" + edge(kBucketEdges[bucket]);
}

}  // namespace

std::vector<EpochError> per_fix_errors(std::span<const switcher::PositionFix> fixes,
                                       std::span<const geo::TimedPoint> truth) {
  std::unordered_map<long long, geo::MapPoint> by_epoch;
  by_epoch.reserve(truth.size());
  for (const auto& t : truth) by_epoch.emplace(t.epoch_ms, t.position);

  std::vector<EpochError> out;
  out.reserve(fixes.size());
  for (const auto& fix : fixes) {
    auto it = by_epoch.find(fix.epoch_ms);
    if (it == by_epoch.end()) {
      throw AlignmentError("fix epoch " + std::to_string(fix.epoch_ms) +
                               " has no ground-truth row",
                           fix.epoch_ms);
    }
    out.push_back({fix.epoch_ms, planar::euclidean(fix.position, it->second)});
  }
  return out;
}

std::vector<double> error_values(std::span<const EpochError> errors) {
  std::vector<double> out;
  out.reserve(errors.size());
  for (const auto& e : errors) out.push_back(e.error_m);
  return out;
}

std::size_t bucket_of(double error_m) {
  auto it = std::upper_bound(kBucketEdges.begin(), kBucketEdges.end(), error_m);
  return static_cast<std::size_t>(it - kBucketEdges.begin());
}

double fraction_below(std::span<const double> errors, double threshold_m) {
  if (errors.empty()) return 0.0;
  const auto below = std::count_if(errors.begin(), errors.end(),
                                   [&](double e) { return e < threshold_m; });
  return static_cast<double>(below) / static_cast<double>(errors.size());
}

ErrorStats summarize(std::span<const double> errors, std::span<const double> thresholds) {
  if (errors.empty()) throw ConsistencyError("no errors to summarize");
  std::vector<double> sorted(errors.begin(), errors.end());
  for (double e : sorted) {
    if (!(e >= 0.0) || !std::isfinite(e)) {
      throw ConsistencyError("errors must be finite and >= 0");
    }
  }
  std::sort(sorted.begin(), sorted.end());

  ErrorStats stats;
  stats.n = sorted.size();
  double sum = 0.0;
  for (double e : sorted) {
    ++stats.buckets[bucket_of(e)];
    sum += e;
  }
  const double n = static_cast<double>(stats.n);
  for (std::size_t b = 0; b < kBucketCount; ++b) {
    stats.probabilities[b] = static_cast<double>(stats.buckets[b]) / n;
  }
  stats.average_m = sum / n;
  for (double t : thresholds) stats.percent_below[t] = fraction_below(sorted, t);
  return stats;
}

std::string to_json(const ErrorStats& stats) {
  nlohmann::ordered_json doc;
  doc["n"] = stats.n;
  doc["average_m"] = stats.average_m;
  auto buckets = nlohmann::ordered_json::array();
  for (std::size_t b = 0; b < kBucketCount; ++b) {
    nlohmann::ordered_json entry;
    entry["range_m"] = range_label(b);
    entry["lo_m"] = b == 0 ? 0.0 : kBucketEdges[b - 1];
    if (b + 1 < kBucketCount) {
      entry["hi_m"] = kBucketEdges[b];
    } else {
      entry["hi_m"] = nullptr;
    }
    entry["count"] = stats.buckets[b];
    entry["probability"] = stats.probabilities[b];
    buckets.push_back(std::move(entry));
  }
  doc["buckets"] = std::move(buckets);
  doc["bucket_convention"] = "half-open [lo, hi)";
  auto below = nlohmann::ordered_json::object();
  for (const auto& [threshold, fraction] : stats.percent_below) {
    below[csv::format_double(threshold)] = fraction;
  }
  doc["percent_below"] = std::move(below);
  doc["below_convention"] = "strict: error < threshold";
  return doc.dump(2) + "\n";
}

std::string to_table(const ErrorStats& stats) {
  std::ostringstream out;
  char cell[32];
  auto row = [&](const char* label, auto&& value_of) {
    std::snprintf(cell, sizeof(cell), "%-12s", label);
    out << cell;
    for (std::size_t b = 0; b < kBucketCount; ++b) {
      std::snprintf(cell, sizeof(cell), "%10s", value_of(b).c_str());
      out << cell;
    }
    out << '\n';
  };
  row("Error (m)", [](std::size_t b) { return range_label(b); });
  row("Occurrence", [&](std::size_t b) { return std::to_string(stats.buckets[b]); });
  row("Probability", [&](std::size_t b) {
    return csv::format_fixed(100.0 * stats.probabilities[b], 4) + "%";
  });
  out << "Average Error = " << csv::format_fixed(stats.average_m, 4) << " m (n = "
      << stats.n << ")\n";
  for (const auto& [threshold, fraction] : stats.percent_below) {
    out << "Below " << csv::format_double(threshold)
        << " m = " << csv::format_fixed(100.0 * fraction, 4) << "%\n";
  }
  out << "Buckets are half-open [lo, hi); 'below' is strict.\n";
  return out.str();
}

void write_errors(std::ostream& out, std::span<const EpochError> errors) {
  out << kErrorsHeader << '\n';
  for (const auto& e : errors) {
    out << e.epoch_ms << ',' << csv::format_double(e.error_m) << '\n';
  }
}

std::vector<EpochError> read_errors(std::istream& in, const std::string& source) {
  csv::Reader reader(in, source);
  reader.expect_header(kErrorsHeader);
  std::vector<EpochError> errors;
  while (reader.next()) {
    reader.expect_fields(2);
    EpochError e{reader.integer(0, "epoch_ms"), reader.number(1, "error_m")};
    if (e.error_m < 0.0) reader.fail("error_m must be >= 0");
    errors.push_back(e);
  }
  return errors;
}

std::vector<EpochError> read_errors(const std::string& path) {
  auto in = csv::open_input(path);
  return read_errors(in, path);
}

void write_cdf(std::ostream& out, std::span<const double> errors, double step_m) {
  if (!(step_m > 0.0)) throw ConsistencyError("CDF step must be > 0");
  out << kCdfHeader << '\n';
  if (errors.empty()) return;
  for (long long i = 0;; ++i) {
    const double threshold = static_cast<double>(i) * step_m;
    const double fraction = fraction_below(errors, threshold);
    out << csv::format_double(threshold) << ',' << csv::format_double(fraction) << '\n';
    if (fraction >= 1.0) break;
  }
}

}  // namespace hybridloc::eval
