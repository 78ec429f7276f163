#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "loops/stats.hpp"

namespace loops {

/// Flat key-value parameters of one experiment run.
struct ExperimentConfig {
  std::string experiment;
  std::map<std::string, std::string> values;
  std::string out_dir;  ///< empty: nothing is written
};

/// "key = value" per line, '#' starts a comment. Duplicates and malformed
/// lines are InvalidConfig.
std::map<std::string, std::string> parse_key_values(std::string_view text);
ExperimentConfig load_config(const std::string& experiment, const std::string& path);

struct ParamSpec {
  std::string name;
  std::string default_value;
  std::string help;
};

struct ExperimentInfo {
  std::string name;
  std::string summary;
  std::vector<ParamSpec> params;
};

const std::vector<ExperimentInfo>& experiment_registry();
/// Throws UnknownExperiment.
const ExperimentInfo& experiment_info(const std::string& name);

/// Defaults overlaid with the given values; unknown keys and unparsable
/// values are InvalidConfig. "seed" is accepted by every experiment.
std::map<std::string, std::string> resolve_config(const ExperimentConfig& c);

struct NamedEstimate {
  std::string name;
  Estimate estimate;
};

/// Declared tolerance: passes iff lo <= value <= hi (NaN fails).
struct Check {
  std::string name;
  double value = 0;
  double lo = 0;
  double hi = 0;
  bool pass = false;
  std::string reference;
};

bool check_passes(const Check& c);

struct RunRecord {
  std::string experiment;
  std::map<std::string, std::string> config;
  std::uint64_t seed = 0;
  std::string started, finished;
  std::vector<NamedEstimate> estimates;
  std::vector<Check> checks;
  std::vector<std::string> notes;
  std::vector<std::string> artifacts;
  std::string error;  ///< experiment-level failure, empty on success

  bool passed() const;
  /// Throws InvalidParameter if absent.
  const Estimate& estimate(const std::string& name) const;
  const Check& check(const std::string& name) const;
};

struct RunOptions {
  std::optional<std::uint64_t> seed;  ///< overrides the config's seed
  int jobs = 0;
  bool write_artifacts = true;
};

/// Dispatches to a registered experiment. Config problems throw
/// (UnknownExperiment, InvalidConfig); errors raised while the experiment
/// runs are stored in the record. With an output directory the record is
/// appended to records.jsonl and its tables and plots are written there.
RunRecord run(const ExperimentConfig& c, const RunOptions& o = {});

std::string record_to_json(const RunRecord& r);
RunRecord record_from_json(std::string_view line);
void append_record(const std::string& path, const RunRecord& r);
std::vector<RunRecord> read_records(const std::string& path);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// One row per record.
Table report(const std::vector<RunRecord>& records);
/// Estimates and checks of one record.
Table record_table(const RunRecord& r);
void write_csv(std::ostream& out, const Table& t);

struct Series {
  std::string label;
  std::vector<double> x, y;
};

struct Plot {
  std::string title, x_label, y_label;
  bool log_x = false, log_y = false;
  std::vector<Series> series;
};

struct Axis {
  double lo = 0, hi = 1;
  bool log = false;
  std::vector<double> ticks;
  /// Pixel coordinate of v on [px0, px1].
  double map(double v, double px0, double px1) const;
};

/// Range and ticks covering the finite values (positive ones on a log axis).
Axis make_axis(const std::vector<double>& values, bool log);
std::string render_svg(const Plot& p);

}  // namespace loops
