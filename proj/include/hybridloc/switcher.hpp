#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hybridloc/geo.hpp"
#include "hybridloc/matcher.hpp"
#include "hybridloc/radiomap.hpp"

namespace hybridloc::switcher {

using geo::MapPoint;

inline constexpr std::string_view kTraceHeader = "epoch_ms,kind,f1,f2,f3";
inline constexpr std::string_view kFixHeader = "epoch_ms,source,x,y";

struct GpsReading {
  geo::GeoCoordinate coordinate;
  bool valid = false;

  friend bool operator==(const GpsReading&, const GpsReading&) = default;
};

/// Everything the sensors reported at one instant. Either sensor may be
/// silent.
struct SensorEpoch {
  long long epoch_ms = 0;
  std::optional<GpsReading> gps;
  std::optional<matcher::RssiScan> wlan;

  bool has_valid_gps() const { return gps.has_value() && gps->valid; }

  friend bool operator==(const SensorEpoch&, const SensorEpoch&) = default;
};

enum class Mode { Unknown, Outdoor, Indoor };
enum class Source { GPS, WLAN };

std::string_view to_string(Mode mode);
std::string_view to_string(Source source);

struct PositionFix {
  long long epoch_ms = 0;
  MapPoint position;
  Source source = Source::GPS;

  friend bool operator==(const PositionFix&, const PositionFix&) = default;
};

struct SwitchConfig {
  int gps_timeout_epochs = 3;  ///< consecutive GPS misses before going indoor
  std::size_t k = 1;
  double floor_dbm = matcher::kDefaultFloorDbm;
  /// Repeat the previous fix during the debounce gap instead of emitting
  /// nothing. The repeated fix keeps its original source.
  bool emit_last_known = false;

  void validate() const;
};

struct SwitchState {
  Mode mode = Mode::Unknown;
  int consecutive_gps_misses = 0;
  std::optional<long long> last_epoch_ms;
  std::optional<PositionFix> last_fix;
};

struct StepResult {
  SwitchState state;
  std::optional<PositionFix> fix;
};

/// Advances the outdoor/indoor state machine by one epoch.
///
/// A valid GPS reading always wins: the miss counter resets, the mode becomes
/// Outdoor and the fix comes from relative interpolation. Otherwise the miss
/// counter grows; once it reaches the timeout a WLAN scan yields an Indoor fix
/// from KNN matching, and a missing scan leaves the mode Unknown with no fix.
/// Before the timeout nothing is emitted. Throws SequencingError when
/// `epoch.epoch_ms` does not exceed the previous epoch.
StepResult step(const SwitchState& state, const SensorEpoch& epoch,
                const geo::ReferencePair& refs, const radiomap::RadioMap& map,
                const SwitchConfig& config);

/// Folds `step` over a trace. Sequencing errors carry the offending epoch
/// index.
std::vector<PositionFix> run_session(std::span<const SensorEpoch> epochs,
                                     const geo::ReferencePair& refs,
                                     const radiomap::RadioMap& map,
                                     const SwitchConfig& config);

/// Trace CSV. Rows sharing an epoch_ms (contiguously) form one SensorEpoch.
///   GPS rows:  epoch_ms,GPS,lat_deg,lon_deg,valid
///   WLAN rows: epoch_ms,WLAN,ap_id,rssi_dbm,
std::vector<SensorEpoch> read_trace(std::istream& in, const std::string& source = {});
std::vector<SensorEpoch> read_trace(const std::string& path);
void write_trace(std::ostream& out, std::span<const SensorEpoch> epochs);

/// Fix CSV: epoch_ms,source,x,y
void write_fixes(std::ostream& out, std::span<const PositionFix> fixes);
std::vector<PositionFix> read_fixes(std::istream& in, const std::string& source = {});
std::vector<PositionFix> read_fixes(const std::string& path);

}  // namespace hybridloc::switcher
