#include "hybridloc/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>

#include "hybridloc/csv.hpp"
#include "hybridloc/error.hpp"
#include "hybridloc/eval.hpp"
#include "hybridloc/geo.hpp"
#include "hybridloc/radio.hpp"
#include "hybridloc/radiomap.hpp"
#include "hybridloc/simulator.hpp"
#include "hybridloc/switcher.hpp"

namespace hybridloc::cli {

namespace {

struct Options {
  // inputs
  std::string env_file;
  std::string grid_file;
  std::string trajectory_file;
  std::string refs_file;
  std::string trace_file;
  std::string radiomap_file;
  std::string fixes_file;
  std::string truth_file;
  std::string errors_file;
  // outputs
  std::string out_file;
  std::string trace_out;
  std::string truth_out;
  std::string json_out;
  std::string errors_out;
  std::string cdf_out;
  // parameters
  std::uint64_t seed = 0;
  int samples = 10;
  long long period_ms = 1000;
  double gps_noise_m = 3.0;
  std::size_t k = 1;
  double floor_dbm = matcher::kDefaultFloorDbm;
  int gps_timeout = 3;
  bool emit_last_known = false;
  std::vector<double> thresholds;
  double cdf_step = 0.5;
  std::string source_filter;
  bool json_stdout = false;
};

/// Fails fast on unreadable inputs and missing output directories.
void check_paths(const std::vector<std::string>& inputs,
                 const std::vector<std::string>& outputs) {
  for (const auto& path : inputs) {
    if (path.empty()) continue;
    std::ifstream probe(path, std::ios::binary);
    if (!probe) throw ParseError("cannot open input file", path);
  }
  for (const auto& path : outputs) {
    if (path.empty()) continue;
    auto parent = std::filesystem::path(path).parent_path();
    if (!parent.empty() && !std::filesystem::is_directory(parent)) {
      throw ParseError("output directory does not exist", path);
    }
  }
}

template <typename Writer>
void write_file(const std::string& path, Writer&& writer) {
  auto out = csv::open_output(path);
  writer(out);
  out.flush();
  if (!out) throw ParseError("write failed", path);
}

int cmd_survey(const Options& o, std::ostream& out) {
  check_paths({o.env_file, o.grid_file}, {o.out_file});
  const auto env = radio::load_environment(o.env_file);
  const auto grid = sim::read_grid(o.grid_file);
  sim::SimConfig cfg;
  cfg.seed = o.seed;
  const auto samples = sim::survey(env, grid, o.samples, cfg);
  const auto map = radiomap::build_radio_map(samples);
  write_file(o.out_file, [&](std::ostream& f) { radiomap::save_radio_map(map, f); });
  out << "survey: " << samples.size() << " samples, " << map.size()
      << " fingerprints -> " << o.out_file << '\n';
  return kExitOk;
}

int cmd_simulate(const Options& o, std::ostream& out) {
  check_paths({o.env_file, o.trajectory_file, o.refs_file}, {o.trace_out, o.truth_out});
  const auto env = radio::load_environment(o.env_file);
  const auto trajectory = sim::read_trajectory(o.trajectory_file);
  const auto refs = geo::load_reference_pair(o.refs_file);
  sim::SimConfig cfg;
  cfg.seed = o.seed;
  cfg.epoch_period_ms = o.period_ms;
  cfg.gps_noise_m = o.gps_noise_m;
  const auto result = sim::generate_trace(env, trajectory, refs, cfg);
  write_file(o.trace_out, [&](std::ostream& f) { switcher::write_trace(f, result.trace); });
  write_file(o.truth_out, [&](std::ostream& f) { sim::write_truth(f, result.truth); });
  out << "simulate: " << result.trace.size() << " epochs -> " << o.trace_out << ", "
      << o.truth_out << '\n';
  return kExitOk;
}

int cmd_locate(const Options& o, std::ostream& out) {
  check_paths({o.trace_file, o.radiomap_file, o.refs_file}, {o.out_file});
  const auto trace = switcher::read_trace(o.trace_file);
  const auto map = radiomap::load_radio_map(o.radiomap_file);
  const auto refs = geo::load_reference_pair(o.refs_file);
  switcher::SwitchConfig cfg;
  cfg.k = o.k;
  cfg.floor_dbm = o.floor_dbm;
  cfg.gps_timeout_epochs = o.gps_timeout;
  cfg.emit_last_known = o.emit_last_known;
  const auto fixes = switcher::run_session(trace, refs, map, cfg);
  write_file(o.out_file, [&](std::ostream& f) { switcher::write_fixes(f, fixes); });
  const auto wlan = std::count_if(fixes.begin(), fixes.end(), [](const auto& f) {
    return f.source == switcher::Source::WLAN;
  });
  out << "locate: " << trace.size() << " epochs, " << fixes.size() << " fixes ("
      << fixes.size() - static_cast<std::size_t>(wlan) << " GPS, " << wlan
      << " WLAN) -> " << o.out_file << '\n';
  return kExitOk;
}

int cmd_evaluate(const Options& o, std::ostream& out) {
  const bool from_errors = !o.errors_file.empty();
  if (from_errors == (!o.fixes_file.empty() || !o.truth_file.empty())) {
    throw ParseError("evaluate needs either --errors or both --fixes and --truth");
  }
  if (!from_errors && (o.fixes_file.empty() || o.truth_file.empty())) {
    throw ParseError("evaluate needs both --fixes and --truth");
  }
  check_paths({o.errors_file, o.fixes_file, o.truth_file},
              {o.json_out, o.errors_out, o.cdf_out});

  std::vector<eval::EpochError> errors;
  if (from_errors) {
    if (!o.source_filter.empty()) {
      throw ParseError("--source needs --fixes input, not --errors");
    }
    errors = eval::read_errors(o.errors_file);
  } else {
    auto fixes = switcher::read_fixes(o.fixes_file);
    const auto truth = sim::read_truth(o.truth_file);
    if (!o.source_filter.empty()) {
      std::erase_if(fixes, [&](const switcher::PositionFix& f) {
        return switcher::to_string(f.source) != o.source_filter;
      });
    }
    errors = eval::per_fix_errors(fixes, truth);
  }
  if (errors.empty()) throw ConsistencyError("no fixes to evaluate");

  const auto values = eval::error_values(errors);
  const auto stats = eval::summarize(values, o.thresholds);

  if (o.json_stdout) {
    out << eval::to_json(stats);
  } else {
    out << eval::to_table(stats);
  }
  if (!o.json_out.empty()) {
    write_file(o.json_out, [&](std::ostream& f) { f << eval::to_json(stats); });
  }
  if (!o.errors_out.empty()) {
    write_file(o.errors_out, [&](std::ostream& f) { eval::write_errors(f, errors); });
  }
  if (!o.cdf_out.empty()) {
    write_file(o.cdf_out, [&](std::ostream& f) { eval::write_cdf(f, values, o.cdf_step); });
  }
  return kExitOk;
}

void describe_formats(CLI::App& app, const std::string& text) { app.footer(text); }

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Hybrid GPS/WLAN positioning: survey, simulate, locate, evaluate"};
  app.name("hybridloc");
  app.require_subcommand(1);

  auto* survey = app.add_subcommand("survey", "Simulate an offline survey and write a radio map");
  survey->add_option("--env", o.env_file, "Radio environment JSON")->required();
  survey->add_option("--grid", o.grid_file, "Survey grid CSV")->required();
  survey->add_option("--out", o.out_file, "Radio-map CSV to write")->required();
  survey->add_option("--seed", o.seed, "PRNG seed")->required();
  survey->add_option("--samples", o.samples, "Samples per point, orientation and AP")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  describe_formats(*survey,
                   "Grid CSV header:      location_id,x_m,y_m\n"
                   "Radio-map CSV header: " + std::string(radiomap::kCsvHeader));

  auto* simulate = app.add_subcommand("simulate", "Generate a sensor trace and ground truth");
  simulate->add_option("--env", o.env_file, "Radio environment JSON")->required();
  simulate->add_option("--trajectory", o.trajectory_file, "Trajectory CSV")->required();
  simulate->add_option("--refs", o.refs_file, "Reference-pair JSON")->required();
  simulate->add_option("--trace-out", o.trace_out, "Trace CSV to write")->required();
  simulate->add_option("--truth-out", o.truth_out, "Ground-truth CSV to write")->required();
  simulate->add_option("--seed", o.seed, "PRNG seed")->required();
  simulate->add_option("--period-ms", o.period_ms, "Epoch period")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  simulate->add_option("--gps-noise-m", o.gps_noise_m, "GPS noise stddev per axis")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  describe_formats(*simulate,
                   "Trajectory CSV header: " + std::string(sim::kTrajectoryHeader) +
                       "\nTrace CSV header:      " + std::string(switcher::kTraceHeader) +
                       "\n  GPS rows:  epoch_ms,GPS,lat_deg,lon_deg,valid(0|1)"
                       "\n  WLAN rows: epoch_ms,WLAN,ap_id,rssi_dbm,"
                       "\nTruth CSV header:      " + std::string(sim::kTruthHeader));

  auto* locate = app.add_subcommand("locate", "Run the GPS/WLAN switching pipeline on a trace");
  locate->add_option("--trace", o.trace_file, "Trace CSV")->required();
  locate->add_option("--radio-map", o.radiomap_file, "Radio-map CSV")->required();
  locate->add_option("--refs", o.refs_file, "Reference-pair JSON")->required();
  locate->add_option("--out", o.out_file, "Fix CSV to write")->required();
  locate->add_option("--k", o.k, "Neighbours averaged by KNN")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  locate->add_option("--floor-dbm", o.floor_dbm, "RSSI substituted for missing APs")
      ->capture_default_str();
  locate->add_option("--gps-timeout", o.gps_timeout, "GPS misses before switching indoor")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  locate->add_flag("--emit-last-known", o.emit_last_known,
                   "Repeat the previous fix during the switching gap");
  describe_formats(*locate,
                   "Trace CSV header:     " + std::string(switcher::kTraceHeader) +
                       "\nRadio-map CSV header: " + std::string(radiomap::kCsvHeader) +
                       "\nFix CSV header:       " + std::string(switcher::kFixHeader));

  auto* evaluate = app.add_subcommand("evaluate", "Error statistics of fixes against truth");
  evaluate->add_option("--fixes", o.fixes_file, "Fix CSV");
  evaluate->add_option("--truth", o.truth_file, "Ground-truth CSV");
  evaluate->add_option("--errors", o.errors_file, "Per-epoch error CSV (instead of fixes/truth)");
  evaluate->add_option("--threshold", o.thresholds, "Report fraction of errors below (repeatable)")
      ->take_first()
      ->expected(1)
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  evaluate->add_option("--source", o.source_filter, "Only evaluate fixes from GPS or WLAN")
      ->check(CLI::IsMember({"GPS", "WLAN"}));
  evaluate->add_flag("--json", o.json_stdout, "Print JSON instead of the text table");
  evaluate->add_option("--json-out", o.json_out, "Write statistics JSON");
  evaluate->add_option("--errors-out", o.errors_out, "Write per-epoch error CSV");
  evaluate->add_option("--cdf-out", o.cdf_out, "Write empirical CDF CSV");
  evaluate->add_option("--cdf-step", o.cdf_step, "CDF threshold step (m)")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  describe_formats(*evaluate,
                   "Fix CSV header:   " + std::string(switcher::kFixHeader) +
                       "\nTruth CSV header: " + std::string(sim::kTruthHeader) +
                       "\nError CSV header: " + std::string(eval::kErrorsHeader) +
                       "\nCDF CSV header:   " + std::string(eval::kCdfHeader));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    // Subcommand help arrives as CallForHelp from the subcommand itself.
    err << "hybridloc: error: input: " << e.what() << '\n';
    return kExitInput;
  }

  try {
    if (survey->parsed()) return cmd_survey(o, out);
    if (simulate->parsed()) return cmd_simulate(o, out);
    if (locate->parsed()) return cmd_locate(o, out);
    if (evaluate->parsed()) return cmd_evaluate(o, out);
  } catch (const ConsistencyError& e) {
    err << "hybridloc: error: consistency: " << e.what() << '\n';
    return kExitConsistency;
  } catch (const Error& e) {
    err << "hybridloc: error: input: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitInput;
}

}  // namespace hybridloc::cli
