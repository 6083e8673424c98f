#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hmckit/diagnostics.hpp"
#include "hmckit/dynamics.hpp"
#include "hmckit/samplers.hpp"
#include "hmckit/target_model.hpp"

namespace hmckit {

// Default directory for run outputs when a spec carries no explicit path.
inline constexpr const char* kOutDirEnvVar = "HMCKIT_OUT_DIR";

// One experiment: a model, a sampler, the sampler's parameters, and the
// post-processing choices. Fields irrelevant to the chosen sampler are
// ignored. n counts recorded states for every sampler; rwmh runs
// n * record_every iterations underneath so that traces of equal n carry
// comparable information.
struct ExperimentSpec {
  std::string label;    // output name; defaults to "<model>_<sampler>"
  std::string model;
  std::string sampler;  // hmc, rwmh or twalk
  int n = 1000;
  std::uint64_t seed = 0;

  // hmc
  double epsilon = 0.1;
  int steps = 10;
  double epsilon_jitter = 0.0;
  Vec mass;  // diagonal entries; empty means identity

  // rwmh
  double sigma = 1.0;
  int record_every = 1;

  Vec init;   // starting point (all samplers)
  Vec init2;  // companion starting point (twalk)

  std::optional<int> burnin;  // absent: detected from the log densities
  std::optional<int> lag;     // absent: ceiling of the monitored IAT
  std::string out;            // output prefix; empty: <out dir>/<label>
};

// Parses "3.5,2,0.25" into a vector. Throws ConfigError naming `field` on
// empty or malformed input.
Vec parse_vector(const std::string& field, const std::string& text);

// Assigns one key = value pair onto a spec. Keys match the struct fields
// (init, init2 and mass as comma lists; burnin and lag also accept "auto").
// Unknown keys and unparsable values throw ConfigError naming the key.
void set_spec_field(ExperimentSpec& spec, const std::string& key,
                    const std::string& value);

// Reads a flat key = value file ('#' starts a comment line, blank lines are
// skipped) into a spec. Throws ConfigError on unknown keys, bad values, or
// lines without '='.
ExperimentSpec parse_spec_file(const std::string& path);

// Cross-checks a spec against the chosen model and sampler; throws
// ConfigError naming the offending field.
void validate_spec(const ExperimentSpec& spec);

// "<out>/<label>" resolution used by run(): the spec's own `out` when set,
// else the directory from HMCKIT_OUT_DIR (default ".") plus the label.
std::string output_prefix(const ExperimentSpec& spec);

struct RunResult {
  Trace trace;
  DiagnosticsReport report;
  // Written files; empty when the run was not persisted.
  std::string trace_path;
  std::string report_txt_path;
  std::string report_csv_path;
};

// Runs the spec's sampler, diagnoses the trace, and (when persist is set)
// writes <prefix>.trace.csv, <prefix>.report.txt and <prefix>.report.csv.
// sampling_seconds covers the sampler call alone, not I/O or diagnostics.
// A chain whose first 1000 states contain no accepted move completes with a
// warning in the report rather than an error.
RunResult run(const ExperimentSpec& spec, bool persist = true);

// One row per spec. A row that failed keeps the error text and leaves the
// report empty; the remaining rows still run.
struct ComparisonRow {
  std::string label;
  bool ok = false;
  DiagnosticsReport report;
  std::string error;
};

struct ComparisonTable {
  std::vector<ComparisonRow> rows;
};

// Runs each spec in order (sequentially, so the recorded times are not
// distorted by contention) and assembles the comparison table.
ComparisonTable compare(const std::vector<ExperimentSpec>& specs,
                        bool persist = true);

std::string comparison_csv(const ComparisonTable& table);
std::string comparison_text(const ComparisonTable& table);

// Writes <prefix>.csv and <prefix>.txt.
void write_comparison(const ComparisonTable& table, const std::string& prefix);

// Built-in experiment trios (hmc, rwmh, twalk at matched settings) for the
// four study targets: "gamma", "binormal", "mixture", "eightschools".
std::vector<std::string> preset_names();
std::vector<ExperimentSpec> preset_specs(const std::string& name);

// Energy drift |H(T) - H(0)| of one method across a step size ladder, with
// the least squares slope of log drift against log epsilon. The slope
// estimates the method's global error order.
struct OrderFit {
  Integrator method;
  Vec drifts;
  double slope = 0.0;
};

struct IntegratorStudy {
  Vec epsilons;
  double total_time = 0.0;
  std::vector<OrderFit> fits;  // leapfrog, euler, symplectic euler
};

// Integrates the model from `start` over total_time for every epsilon in
// the ladder (steps = round(total_time / epsilon)) and fits the order of
// each method. Requires at least four strictly decreasing positive step
// sizes. Throws TrajectoryDivergedError if an integration leaves the
// support and DegenerateSeriesError when the drifts cannot support a fit.
IntegratorStudy integrator_study(const TargetModel& model,
                                 const PhaseState& start, const Vec& epsilons,
                                 double total_time);

std::string integrator_study_text(const IntegratorStudy& study);
std::string integrator_study_csv(const IntegratorStudy& study);

// Max relative error between analytic and central difference gradients over
// 100 fixed points spread through the model's support (seeded draws from a
// per-model box). Throws ConfigError for an unknown model name.
double gradcheck(const std::string& model_name);

}  // namespace hmckit
