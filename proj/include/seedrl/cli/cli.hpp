#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "seedrl/harness/run.hpp"

namespace seedrl::cli {

inline constexpr const char* kVersion = "seedrl 0.1.0";

// A full experiment description: one run configuration swept over k_values x
// n_instances, plus the output location. Assembled from a flat key = value
// text document; every key either appears in the document or takes the
// documented default for the chosen environment / algorithm.
struct ExperimentConfig {
  harness::RunConfig run;
  std::vector<int> k_values;
  int n_instances = 100;
  std::string output = "results";

  bool operator==(const ExperimentConfig&) const = default;
  void validate() const;
};

harness::EnvKind env_from_string(const std::string& s);
harness::AlgoKind algo_from_string(const std::string& s);
harness::ScheduleKind schedule_from_string(const std::string& s);
const char* to_string(harness::ScheduleKind k);

// The documented default table for an environment / algorithm pair.
ExperimentConfig default_config(harness::EnvKind env, harness::AlgoKind algo);

// Parses a flat `key = value` document ('#' starts a comment). `env` and
// `algorithm` are required; all other keys are optional and default from
// default_config(env, algorithm). Unknown or duplicate keys and malformed
// values are errors that name the offending key/line.
ExperimentConfig parse_config(const std::string& text);

// Emits every key explicitly, in a fixed order, such that
// parse_config(emit_config(cfg)) == cfg.
std::string emit_config(const ExperimentConfig& cfg);

// The headline metric reported in per-K summary lines.
const char* primary_metric(harness::EnvKind env);

// Executes the sweep and writes, under the output directory (the
// SEEDRL_OUTPUT_ROOT environment variable prefixes relative paths):
//   curves.csv    header `K,instance,metric_name,time_or_step,value`, LF
//   manifest.json config echo, version, per-instance stream keys, timing
// The manifest is written atomically (temp file + rename) and only after the
// curves file succeeds. Prints one summary line per K to `out`. Throws on
// I/O failure with the path in the message.
void run_experiment(const ExperimentConfig& cfg, std::ostream& out);

// Prints a per-(metric, K) `metric,K,n,mean,se` table aggregated like the
// harness sweep (final value per instance; SE = sample SD / sqrt(n)). Rows
// are ordered by metric name, then K. Malformed input rows raise errors with
// their line number; an empty file is an error.
void summarize(const std::string& curves_path, std::ostream& out);

}  // namespace seedrl::cli
