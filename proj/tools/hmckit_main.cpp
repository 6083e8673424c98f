// hmckit command line front end.
//
// Subcommands:
//   run          one experiment (spec file, preset member, or flags)
//   compare      several experiments into one comparison table
//   integrators  energy drift order study on a harmonic oscillator
//   gradcheck    analytic vs finite difference gradients of a model
//   diagnose     diagnostics for an existing trace CSV
//
// Exit codes: 0 success, 1 configuration or usage error, 2 diagnostics
// failure (burn-in not detectable, degenerate series).

#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hmckit/diagnostics.hpp"
#include "hmckit/errors.hpp"
#include "hmckit/experiment.hpp"
#include "hmckit/format.hpp"
#include "hmckit/trace_io.hpp"

namespace {

struct SpecFlags {
  std::string spec_file;
  std::string label;
  std::string model;
  std::string sampler;
  long long n = -1;
  long long seed = -1;
  double epsilon = -1.0;
  int steps = -1;
  double jitter = -1.0;
  std::string mass;
  double sigma = -1.0;
  int record_every = -1;
  std::string init;
  std::string init2;
  std::string burnin;
  std::string lag;
  std::string out;
};

// Flags land on top of whatever the spec file provided, so a preset or file
// can be tweaked from the command line.
void add_spec_flags(CLI::App* cmd, SpecFlags& f) {
  cmd->add_option("--spec", f.spec_file, "spec file of key = value lines");
  cmd->add_option("--label", f.label, "name used for output files");
  cmd->add_option("--model", f.model, "target model name");
  cmd->add_option("--sampler", f.sampler, "hmc, rwmh or twalk");
  cmd->add_option("--n", f.n, "recorded chain length");
  cmd->add_option("--seed", f.seed, "RNG seed");
  cmd->add_option("--epsilon", f.epsilon, "hmc leapfrog step size");
  cmd->add_option("--steps", f.steps, "hmc steps per trajectory");
  cmd->add_option("--jitter", f.jitter, "hmc step size jitter in [0,1)");
  cmd->add_option("--mass", f.mass, "hmc mass diagonal, comma separated");
  cmd->add_option("--sigma", f.sigma, "rwmh proposal deviation");
  cmd->add_option("--record-every", f.record_every,
                  "rwmh iterations per recorded state");
  cmd->add_option("--init", f.init, "starting point, comma separated");
  cmd->add_option("--init2", f.init2, "twalk companion starting point");
  cmd->add_option("--burnin", f.burnin, "burn-in length or 'auto'");
  cmd->add_option("--lag", f.lag, "thinning lag or 'auto'");
  cmd->add_option("--out", f.out, "output path prefix");
}

void overlay(hmckit::ExperimentSpec& spec, const SpecFlags& f) {
  if (!f.label.empty()) spec.label = f.label;
  if (!f.model.empty()) spec.model = f.model;
  if (!f.sampler.empty()) spec.sampler = f.sampler;
  if (f.n >= 0) hmckit::set_spec_field(spec, "n", std::to_string(f.n));
  if (f.seed >= 0) hmckit::set_spec_field(spec, "seed", std::to_string(f.seed));
  if (f.epsilon >= 0.0) spec.epsilon = f.epsilon;
  if (f.steps >= 0) spec.steps = f.steps;
  if (f.jitter >= 0.0) spec.epsilon_jitter = f.jitter;
  if (!f.mass.empty()) spec.mass = hmckit::parse_vector("mass", f.mass);
  if (f.sigma >= 0.0) spec.sigma = f.sigma;
  if (f.record_every >= 0) spec.record_every = f.record_every;
  if (!f.init.empty()) spec.init = hmckit::parse_vector("init", f.init);
  if (!f.init2.empty()) spec.init2 = hmckit::parse_vector("init2", f.init2);
  if (!f.burnin.empty()) hmckit::set_spec_field(spec, "burnin", f.burnin);
  if (!f.lag.empty()) hmckit::set_spec_field(spec, "lag", f.lag);
  if (!f.out.empty()) spec.out = f.out;
}

hmckit::ExperimentSpec build_spec(const SpecFlags& f) {
  hmckit::ExperimentSpec spec;
  if (!f.spec_file.empty()) spec = hmckit::parse_spec_file(f.spec_file);
  overlay(spec, f);
  return spec;
}

void print_report(const hmckit::DiagnosticsReport& rep) {
  std::fputs(hmckit::report_kv_text(rep).c_str(), stdout);
}

int cmd_run(const SpecFlags& flags, const std::string& preset,
            int preset_index, bool dry) {
  hmckit::ExperimentSpec spec;
  if (!preset.empty()) {
    std::vector<hmckit::ExperimentSpec> trio = hmckit::preset_specs(preset);
    if (preset_index < 1 || preset_index > static_cast<int>(trio.size())) {
      throw hmckit::ConfigError("preset-index", "must lie in [1, 3]");
    }
    spec = trio[static_cast<std::size_t>(preset_index - 1)];
    overlay(spec, flags);
  } else {
    spec = build_spec(flags);
  }
  if (dry) {
    hmckit::validate_spec(spec);
    std::printf("spec ok: %s\n", hmckit::output_prefix(spec).c_str());
    return 0;
  }
  const hmckit::RunResult result = hmckit::run(spec);
  print_report(result.report);
  std::printf("trace: %s\n", result.trace_path.c_str());
  std::printf("report: %s\n", result.report_txt_path.c_str());
  return 0;
}

int cmd_compare(const std::vector<std::string>& spec_files,
                const std::string& preset, const std::string& out) {
  std::vector<hmckit::ExperimentSpec> specs;
  if (!preset.empty()) specs = hmckit::preset_specs(preset);
  for (const std::string& path : spec_files) {
    specs.push_back(hmckit::parse_spec_file(path));
  }
  if (specs.empty()) {
    throw hmckit::ConfigError("specs",
                              "give --preset and/or at least one spec file");
  }
  const hmckit::ComparisonTable table = hmckit::compare(specs);
  std::fputs(hmckit::comparison_text(table).c_str(), stdout);
  std::string prefix = out;
  if (prefix.empty()) {
    const char* dir = std::getenv(hmckit::kOutDirEnvVar);
    prefix = std::string((dir && *dir) ? dir : ".") + "/" +
             (preset.empty() ? "comparison" : preset + "_comparison");
  }
  hmckit::write_comparison(table, prefix);
  std::printf("table: %s.csv\n", prefix.c_str());
  bool all_ok = true;
  for (const hmckit::ComparisonRow& row : table.rows) all_ok &= row.ok;
  return all_ok ? 0 : 1;
}

int cmd_integrators(double total_time, const std::vector<double>& eps,
                    const std::string& out) {
  // Unit harmonic oscillator, one degree of freedom, energy 1.
  const hmckit::TargetModel model = hmckit::make_std_gaussian(1);
  const hmckit::PhaseState start{{1.0}, {1.0}};
  hmckit::Vec ladder = eps;
  if (ladder.empty()) ladder = {0.2, 0.1, 0.05, 0.025};
  const hmckit::IntegratorStudy study =
      hmckit::integrator_study(model, start, ladder, total_time);
  std::fputs(hmckit::integrator_study_text(study).c_str(), stdout);
  if (!out.empty()) {
    std::ofstream file(out, std::ios::binary);
    if (!file) throw std::runtime_error("cannot write " + out);
    file << hmckit::integrator_study_csv(study);
  }
  return 0;
}

int cmd_gradcheck(const std::string& model) {
  std::vector<std::string> names;
  if (model.empty() || model == "all") {
    names = hmckit::builtin_model_names();
  } else {
    names.push_back(model);
  }
  int rc = 0;
  for (const std::string& name : names) {
    const double err = hmckit::gradcheck(name);
    const bool ok = err < 1e-6;
    std::printf("%-13s max relative error %.3e  %s\n", name.c_str(), err,
                ok ? "ok" : "SUSPECT");
    if (!ok) rc = 1;
  }
  return rc;
}

int cmd_diagnose(const std::string& trace_path, const std::string& burnin,
                 const std::string& lag) {
  hmckit::Trace trace = hmckit::read_trace_csv(trace_path);
  std::optional<int> b;
  std::optional<int> l;
  if (!burnin.empty() && burnin != "auto") b = std::stoi(burnin);
  if (!lag.empty() && lag != "auto") l = std::stoi(lag);
  const hmckit::DiagnosticsReport rep = hmckit::diagnose_trace(trace, b, l);
  print_report(rep);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gradient based MCMC toolkit"};
  app.require_subcommand(1);

  SpecFlags run_flags;
  std::string run_preset;
  int run_preset_index = 1;
  bool run_dry = false;
  CLI::App* run_cmd = app.add_subcommand("run", "run one experiment");
  add_spec_flags(run_cmd, run_flags);
  run_cmd->add_option("--preset", run_preset,
                      "preset name (gamma, binormal, mixture, eightschools)");
  run_cmd->add_option("--preset-index", run_preset_index,
                      "member of the preset trio: 1 hmc, 2 rwmh, 3 twalk");
  run_cmd->add_flag("--dry-run", run_dry, "validate the spec and exit");

  std::vector<std::string> cmp_files;
  std::string cmp_preset;
  std::string cmp_out;
  CLI::App* cmp_cmd =
      app.add_subcommand("compare", "run experiments into one table");
  cmp_cmd->add_option("specs", cmp_files, "spec files, one per row");
  cmp_cmd->add_option("--preset", cmp_preset, "preset trio to include");
  cmp_cmd->add_option("--out", cmp_out, "output prefix for .csv/.txt");

  double int_time = 5.0;
  std::vector<double> int_eps;
  std::string int_out;
  CLI::App* int_cmd = app.add_subcommand(
      "integrators", "fit integrator error orders on a harmonic oscillator");
  int_cmd->add_option("--time", int_time, "total integration time");
  int_cmd->add_option("--epsilon", int_eps,
                      "step size ladder, decreasing (default 0.2 0.1 0.05 "
                      "0.025)");
  int_cmd->add_option("--out", int_out, "CSV output path");

  std::string grad_model;
  CLI::App* grad_cmd =
      app.add_subcommand("gradcheck", "finite difference gradient check");
  grad_cmd->add_option("model", grad_model, "model name or 'all'");

  std::string diag_trace;
  std::string diag_burnin;
  std::string diag_lag;
  CLI::App* diag_cmd =
      app.add_subcommand("diagnose", "diagnostics for an existing trace");
  diag_cmd->add_option("trace", diag_trace, "trace CSV path")->required();
  diag_cmd->add_option("--burnin", diag_burnin, "burn-in length or 'auto'");
  diag_cmd->add_option("--lag", diag_lag, "thinning lag or 'auto'");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      return cmd_run(run_flags, run_preset, run_preset_index, run_dry);
    }
    if (cmp_cmd->parsed()) {
      return cmd_compare(cmp_files, cmp_preset, cmp_out);
    }
    if (int_cmd->parsed()) {
      return cmd_integrators(int_time, int_eps, int_out);
    }
    if (grad_cmd->parsed()) {
      return cmd_gradcheck(grad_model);
    }
    if (diag_cmd->parsed()) {
      return cmd_diagnose(diag_trace, diag_burnin, diag_lag);
    }
  } catch (const hmckit::ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const hmckit::NotConvergedError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const hmckit::DegenerateSeriesError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
