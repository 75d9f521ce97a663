#include "hybridloc/switcher.hpp"

#include "hybridloc/csv.hpp"
#include "hybridloc/error.hpp"

namespace hybridloc::switcher {

std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::Outdoor: return "Outdoor";
    case Mode::Indoor: return "Indoor";
    case Mode::Unknown: break;
  }
  return "Unknown";
}

std::string_view to_string(Source source) {
  return source == Source::GPS ? "GPS" : "WLAN";
}

void SwitchConfig::validate() const {
  if (gps_timeout_epochs < 1) throw ConsistencyError("gps timeout must be >= 1 epoch");
  if (k < 1) throw ConsistencyError("k must be >= 1");
}

StepResult step(const SwitchState& state, const SensorEpoch& epoch,
                const geo::ReferencePair& refs, const radiomap::RadioMap& map,
                const SwitchConfig& config) {
  if (state.last_epoch_ms && epoch.epoch_ms <= *state.last_epoch_ms) {
    throw SequencingError("epoch " + std::to_string(epoch.epoch_ms) +
                              " does not follow epoch " +
                              std::to_string(*state.last_epoch_ms),
                          0);
  }

  StepResult out{state, std::nullopt};
  SwitchState& next = out.state;
  next.last_epoch_ms = epoch.epoch_ms;

  if (epoch.has_valid_gps()) {
    next.consecutive_gps_misses = 0;
    next.mode = Mode::Outdoor;
    out.fix = PositionFix{epoch.epoch_ms,
                          geo::interpolate_map_position(epoch.gps->coordinate, refs),
                          Source::GPS};
  } else {
    ++next.consecutive_gps_misses;
    if (next.consecutive_gps_misses >= config.gps_timeout_epochs) {
      if (epoch.wlan) {
        next.mode = Mode::Indoor;
        auto match = matcher::knn_locate(*epoch.wlan, map, config.k, config.floor_dbm);
        out.fix = PositionFix{epoch.epoch_ms, match.position, Source::WLAN};
      } else {
        next.mode = Mode::Unknown;
      }
    } else if (config.emit_last_known && state.last_fix) {
      PositionFix repeated = *state.last_fix;
      repeated.epoch_ms = epoch.epoch_ms;
      out.fix = repeated;
    }
  }

  if (out.fix) next.last_fix = out.fix;
  return out;
}

std::vector<PositionFix> run_session(std::span<const SensorEpoch> epochs,
                                     const geo::ReferencePair& refs,
                                     const radiomap::RadioMap& map,
                                     const SwitchConfig& config) {
  config.validate();
  std::vector<PositionFix> fixes;
  SwitchState state;
  for (std::size_t i = 0; i < epochs.size(); ++i) {
    StepResult result;
    try {
      result = step(state, epochs[i], refs, map, config);
    } catch (const SequencingError& e) {
      throw SequencingError("epoch #" + std::to_string(i) + ": " + e.what(), i);
    }
    state = std::move(result.state);
    if (result.fix) fixes.push_back(*result.fix);
  }
  return fixes;
}

std::vector<SensorEpoch> read_trace(std::istream& in, const std::string& source) {
  csv::Reader reader(in, source);
  reader.expect_header(kTraceHeader);

  std::vector<SensorEpoch> epochs;
  bool open = false;
  while (reader.next()) {
    reader.expect_fields(5);
    const long long epoch_ms = reader.integer(0, "epoch_ms");
    const std::string kind = reader.text(1, "kind");
    if (!open || epochs.back().epoch_ms != epoch_ms) {
      epochs.push_back(SensorEpoch{epoch_ms, std::nullopt, std::nullopt});
      open = true;
    }
    SensorEpoch& current = epochs.back();

    if (kind == "GPS") {
      if (current.gps) reader.fail("second GPS row for epoch " + std::to_string(epoch_ms));
      const double lat = reader.number(2, "lat_deg");
      const double lon = reader.number(3, "lon_deg");
      const long long valid = reader.integer(4, "valid");
      if (valid != 0 && valid != 1) reader.fail("field 'valid' must be 0 or 1");
      if (lat < -90.0 || lat > 90.0) reader.fail("lat_deg out of range [-90, 90]");
      if (lon < -180.0 || lon > 180.0) reader.fail("lon_deg out of range [-180, 180]");
      current.gps = GpsReading{{lat, lon}, valid == 1};
    } else if (kind == "WLAN") {
      const std::string ap_id = reader.text(2, "ap_id");
      const double rssi = reader.number(3, "rssi_dbm");
      if (!reader.fields()[4].empty()) reader.fail("WLAN rows leave f3 empty");
      if (rssi < -120.0 || rssi > 0.0) reader.fail("rssi_dbm out of range [-120, 0]");
      if (!current.wlan) current.wlan = matcher::RssiScan{epoch_ms, {}};
      if (!current.wlan->readings.emplace(ap_id, rssi).second) {
        reader.fail("duplicate reading for AP '" + ap_id + "' in epoch " +
                    std::to_string(epoch_ms));
      }
    } else {
      reader.fail("unknown kind '" + kind + "', expected GPS or WLAN");
    }
  }
  return epochs;
}

std::vector<SensorEpoch> read_trace(const std::string& path) {
  auto in = csv::open_input(path);
  return read_trace(in, path);
}

void write_trace(std::ostream& out, std::span<const SensorEpoch> epochs) {
  out << kTraceHeader << '\n';
  for (const auto& epoch : epochs) {
    if (epoch.gps) {
      out << epoch.epoch_ms << ",GPS," << csv::format_double(epoch.gps->coordinate.lat_deg)
          << ',' << csv::format_double(epoch.gps->coordinate.lon_deg) << ','
          << (epoch.gps->valid ? 1 : 0) << '\n';
    }
    if (epoch.wlan) {
      for (const auto& [ap_id, rssi] : epoch.wlan->readings) {
        out << epoch.epoch_ms << ",WLAN," << ap_id << ',' << csv::format_double(rssi)
            << ",\n";
      }
    }
  }
}

void write_fixes(std::ostream& out, std::span<const PositionFix> fixes) {
  out << kFixHeader << '\n';
  for (const auto& fix : fixes) {
    out << fix.epoch_ms << ',' << to_string(fix.source) << ','
        << csv::format_double(fix.position.x) << ','
        << csv::format_double(fix.position.y) << '\n';
  }
}

std::vector<PositionFix> read_fixes(std::istream& in, const std::string& source) {
  csv::Reader reader(in, source);
  reader.expect_header(kFixHeader);
  std::vector<PositionFix> fixes;
  while (reader.next()) {
    reader.expect_fields(4);
    PositionFix fix;
    fix.epoch_ms = reader.integer(0, "epoch_ms");
    const std::string src = reader.text(1, "source");
    if (src == "GPS") {
      fix.source = Source::GPS;
    } else if (src == "WLAN") {
      fix.source = Source::WLAN;
    } else {
      reader.fail("source must be GPS or WLAN");
    }
    fix.position = {reader.number(2, "x"), reader.number(3, "y")};
    fixes.push_back(fix);
  }
  return fixes;
}

std::vector<PositionFix> read_fixes(const std::string& path) {
  auto in = csv::open_input(path);
  return read_fixes(in, path);
}

}  // namespace hybridloc::switcher
