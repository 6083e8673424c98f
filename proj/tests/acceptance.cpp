// Acceptance harness: one line per criterion, nonzero exit if any fails.
// Tolerances live here, next to each check, so a failure line carries the
// measured value and the band it missed.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "hmckit/diagnostics.hpp"
#include "hmckit/dynamics.hpp"
#include "hmckit/errors.hpp"
#include "hmckit/experiment.hpp"
#include "hmckit/rng.hpp"
#include "hmckit/samplers.hpp"
#include "hmckit/target_model.hpp"
#include "hmckit/trace_io.hpp"

using namespace hmckit;

namespace {

int failures = 0;

void report(int id, const std::string& name, bool pass,
            const std::string& detail) {
  std::printf("[%s] criterion %2d: %s (%s)\n", pass ? "PASS" : "FAIL", id,
              name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

bool in_band(double x, double center, double half) {
  return std::abs(x - center) <= half;
}

std::string band_text(const char* label, double x, double center,
                      double half) {
  return std::string(label) + " " + num(x) + " vs " + num(center) + " +/- " +
         num(half);
}

// ---- criterion 1: gradients ----

void criterion_gradients() {
  double worst = 0.0;
  std::string worst_model;
  bool pass = true;
  for (const std::string& name : builtin_model_names()) {
    const double err = gradcheck(name);
    if (err > worst) {
      worst = err;
      worst_model = name;
    }
    pass = pass && err < 1e-6;
  }
  report(1, "analytic gradients match finite differences", pass,
         "worst rel err " + num(worst) + " on " + worst_model +
             ", bound 1e-6");
}

// ---- criterion 2: reversibility ----

void criterion_reversibility() {
  struct Case {
    TargetModel model;
    Vec lo, hi;
    double eps;
  };
  // The eight-schools case needs a shorter step: the tau-eta coupling makes
  // the local curvature grow quadratically away from the origin, and box
  // corners carry enough energy to push a 0.1 step past the stability limit.
  const std::vector<Case> cases = {
      {make_std_gaussian(2), {-3.0, -3.0}, {3.0, 3.0}, 0.1},
      {make_binormal(), {-3.0, -3.0}, {3.0, 3.0}, 0.1},
      {make_mixture(), {-8.0, -8.0}, {9.0, 9.0}, 0.1},
      {make_eight_schools(), Vec(10, -2.0), Vec(10, 2.0), 0.02},
  };
  Rng rng(2026);
  double worst = 0.0;
  for (const Case& c : cases) {
    const MassMatrix mass = MassMatrix::identity(c.model.dim);
    for (int i = 0; i < 20; ++i) {
      PhaseState s;
      s.q.resize(c.lo.size());
      s.p.resize(c.lo.size());
      for (std::size_t j = 0; j < c.lo.size(); ++j) {
        s.q[j] = c.lo[j] + (c.hi[j] - c.lo[j]) * rng.uniform();
        s.p[j] = rng.normal();
      }
      const int steps = 20 + 20 * (i % 5);
      worst = std::max(worst,
                       reversibility_defect(c.model, s, c.eps, steps, mass));
    }
  }
  report(2, "leapfrog round trips return to the start", worst < 1e-9,
         "worst defect " + num(worst) + " over 80 starts, bound 1e-9");
}

// ---- criterion 3: symplecticity ----

void criterion_symplecticity() {
  const TargetModel harmonic = make_std_gaussian(1);
  const MassMatrix m1 = MassMatrix::identity(1);
  const PhaseState s1{{0.7}, {-0.3}};
  const auto lf1 = check_step_jacobian(harmonic, s1, 0.1, m1,
                                       Integrator::leapfrog);
  const auto eu = check_step_jacobian(harmonic, s1, 0.1, m1,
                                      Integrator::euler);
  const auto lf2 = check_step_jacobian(make_binormal(), {{0.4, -0.2}, {0.3, 0.9}},
                                       0.1, MassMatrix::identity(2),
                                       Integrator::leapfrog);
  const bool pass = lf1.symplectic_defect < 1e-4 &&
                    std::abs(lf1.det - 1.0) < 1e-4 &&
                    lf2.symplectic_defect < 1e-4 &&
                    std::abs(lf2.det - 1.0) < 1e-4 &&
                    !(eu.symplectic_defect < 1e-4);
  report(3, "leapfrog is symplectic, explicit Euler is not", pass,
         "leapfrog defect " + num(std::max(lf1.symplectic_defect,
                                           lf2.symplectic_defect)) +
             ", |det-1| " +
             num(std::max(std::abs(lf1.det - 1.0), std::abs(lf2.det - 1.0))) +
             ", euler defect " + num(eu.symplectic_defect));
}

// ---- criterion 4: integrator orders ----

void criterion_orders() {
  const IntegratorStudy study = integrator_study(
      make_std_gaussian(1), PhaseState{{1.0}, {1.0}}, {0.2, 0.1, 0.05, 0.025},
      5.0);
  double lf = 0.0, eu = 0.0, se = 0.0;
  for (const OrderFit& fit : study.fits) {
    if (fit.method == Integrator::leapfrog) lf = fit.slope;
    if (fit.method == Integrator::euler) eu = fit.slope;
    if (fit.method == Integrator::symplectic_euler) se = fit.slope;
  }
  const bool pass =
      in_band(lf, 2.0, 0.3) && in_band(eu, 1.0, 0.3) && in_band(se, 1.0, 0.3);
  report(4, "fitted global orders match 2 / 1 / 1", pass,
         "leapfrog " + num(lf) + ", euler " + num(eu) +
             ", symplectic euler " + num(se) + ", bands +/- 0.3");
}

// ---- criterion 5: exact flow accepts everything ----

void criterion_exact_flow() {
  HmcConfig cfg;
  cfg.epsilon = 0.157;
  cfg.steps = 10;
  cfg.n = 10000;
  cfg.seed = 2026;
  const Trace trace = hmc_sample(make_std_gaussian(2), cfg, {1.0, -1.0},
                                 exact_gaussian_proposal());
  const double acc = acceptance_rate(trace);
  report(5, "exact-flow proposals are always accepted", acc == 1.0,
         "acceptance " + num(acc) + " over 10000 proposals");
}

// ---- criterion 6: gamma(5,1) study ----

void criterion_gamma() {
  const auto specs = preset_specs("gamma");
  const RunResult hmc = run(specs[0], false);
  const RunResult rwmh = run(specs[1], false);
  const RunResult twalk = run(specs[2], false);

  const double mean = hmc.report.post_summary[0].mean;
  const double var = hmc.report.post_summary[0].variance;
  std::vector<std::string> bad;
  if (!(hmc.report.acceptance >= 0.99)) {
    bad.push_back("hmc acceptance " + num(hmc.report.acceptance) + " < 0.99");
  }
  if (!in_band(mean, 5.0, 0.15)) {
    bad.push_back(band_text("hmc mean", mean, 5.0, 0.15));
  }
  if (!in_band(var, 5.0, 0.75)) {
    bad.push_back(band_text("hmc variance", var, 5.0, 0.75));
  }
  if (!in_band(rwmh.report.acceptance, 0.44, 0.05)) {
    bad.push_back(
        band_text("rwmh acceptance", rwmh.report.acceptance, 0.44, 0.05));
  }
  if (!in_band(twalk.report.acceptance, 0.60, 0.10)) {
    bad.push_back(
        band_text("twalk acceptance", twalk.report.acceptance, 0.60, 0.10));
  }

  std::string detail;
  if (bad.empty()) {
    detail = "hmc acc " + num(hmc.report.acceptance) + ", mean " + num(mean) +
             ", var " + num(var) + ", rwmh acc " +
             num(rwmh.report.acceptance) + ", twalk acc " +
             num(twalk.report.acceptance);
  } else {
    for (std::size_t i = 0; i < bad.size(); ++i) {
      if (i) detail += "; ";
      detail += bad[i];
    }
  }
  report(6, "gamma(5,1) comparative study", bad.empty(), detail);
}

// ---- criterion 7: degenerate tuning ----

void criterion_degenerate() {
  ExperimentSpec spec;
  spec.model = "gamma51";
  spec.sampler = "hmc";
  spec.n = 5000;
  spec.seed = 1;
  spec.epsilon = 5.0;
  spec.steps = 6;
  spec.init = {500.0};
  spec.burnin = 0;
  const RunResult r = run(spec, false);
  report(7, "degenerate step size rejects nearly everything",
         r.report.acceptance <= 0.01,
         "acceptance " + num(r.report.acceptance) + ", bound 0.01");
}

// ---- criterion 8: bivariate normal study ----

void criterion_binormal() {
  const auto specs = preset_specs("binormal");
  const RunResult hmc = run(specs[0], false);
  const RunResult rwmh = run(specs[1], false);
  const RunResult twalk = run(specs[2], false);

  // Post burn-in covariance of the HMC chain against Sigma.
  const Trace post = thin(hmc.trace, *specs[0].burnin, 1);
  const std::size_t n = post.size();
  double m0 = 0.0, m1 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    m0 += post.row(i)[0];
    m1 += post.row(i)[1];
  }
  m0 /= static_cast<double>(n);
  m1 /= static_cast<double>(n);
  double c00 = 0.0, c01 = 0.0, c11 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = post.row(i)[0] - m0;
    const double b = post.row(i)[1] - m1;
    c00 += a * a;
    c01 += a * b;
    c11 += b * b;
  }
  c00 /= static_cast<double>(n - 1);
  c01 /= static_cast<double>(n - 1);
  c11 /= static_cast<double>(n - 1);
  const double cov_err = std::max(
      {std::abs(c00 - 1.0), std::abs(c01 + 0.85), std::abs(c11 - 1.0)});

  std::vector<std::string> bad;
  if (!(hmc.report.acceptance >= 0.97)) {
    bad.push_back("hmc acceptance " + num(hmc.report.acceptance) + " < 0.97");
  }
  if (!in_band(rwmh.report.acceptance, 0.83, 0.05)) {
    bad.push_back(
        band_text("rwmh acceptance", rwmh.report.acceptance, 0.83, 0.05));
  }
  if (!in_band(twalk.report.acceptance, 0.42, 0.10)) {
    bad.push_back(
        band_text("twalk acceptance", twalk.report.acceptance, 0.42, 0.10));
  }
  if (!(cov_err < 0.05)) {
    bad.push_back("hmc covariance error " + num(cov_err) + " >= 0.05");
  }

  std::string detail;
  if (bad.empty()) {
    detail = "hmc acc " + num(hmc.report.acceptance) + ", rwmh acc " +
             num(rwmh.report.acceptance) + ", twalk acc " +
             num(twalk.report.acceptance) + ", cov err " + num(cov_err);
  } else {
    for (std::size_t i = 0; i < bad.size(); ++i) {
      if (i) detail += "; ";
      detail += bad[i];
    }
  }
  report(8, "bivariate normal comparative study", bad.empty(), detail);
}

// ---- criterion 9: mixture mode-trapping ----

void criterion_mixture() {
  const auto specs = preset_specs("mixture");
  const RunResult hmc = run(specs[0], false);
  const RunResult rwmh = run(specs[1], false);
  const RunResult twalk = run(specs[2], false);
  const std::vector<Vec> centers{{-4.0, -4.0}, {5.0, 5.0}};

  const double occ_hmc =
      mode_occupancy(hmc.trace, centers, 3.0, *specs[0].burnin)[1];
  const double occ_rwmh =
      mode_occupancy(rwmh.trace, centers, 3.0, *specs[1].burnin)[1];
  const double occ_twalk =
      mode_occupancy(twalk.trace, centers, 3.0, *specs[2].burnin)[1];

  std::vector<std::string> bad;
  if (!(occ_hmc < 0.05)) {
    bad.push_back("hmc mode-2 occupancy " + num(occ_hmc) + " >= 0.05");
  }
  if (!(occ_rwmh < 0.05)) {
    bad.push_back("rwmh mode-2 occupancy " + num(occ_rwmh) + " >= 0.05");
  }
  if (!in_band(occ_twalk, 0.6, 0.15)) {
    bad.push_back(band_text("twalk mode-2 occupancy", occ_twalk, 0.6, 0.15));
  }
  if (!in_band(hmc.report.acceptance, 0.92, 0.06)) {
    bad.push_back(
        band_text("hmc acceptance", hmc.report.acceptance, 0.92, 0.06));
  }

  std::string detail;
  if (bad.empty()) {
    detail = "hmc occ " + num(occ_hmc) + ", rwmh occ " + num(occ_rwmh) +
             ", twalk occ " + num(occ_twalk) + ", hmc acc " +
             num(hmc.report.acceptance);
  } else {
    for (std::size_t i = 0; i < bad.size(); ++i) {
      if (i) detail += "; ";
      detail += bad[i];
    }
  }
  report(9, "mixture mode-trapping study", bad.empty(), detail);
}

// ---- criterion 10: eight schools study ----

void criterion_eight_schools() {
  const auto specs = preset_specs("eightschools");
  const RunResult hmc = run(specs[0], false);
  const RunResult rwmh = run(specs[1], false);
  const RunResult twalk = run(specs[2], false);

  const double tau_hmc = hmc.report.iat_per_dim[9];
  const double tau_rwmh = rwmh.report.iat_per_dim[9];
  const double eps_hmc = hmc.report.ess_value / hmc.report.sampling_seconds;
  const double eps_rwmh = rwmh.report.ess_value / rwmh.report.sampling_seconds;
  const double eps_twalk =
      twalk.report.ess_value / twalk.report.sampling_seconds;

  std::vector<std::string> bad;
  if (!in_band(hmc.report.acceptance, 0.93, 0.05)) {
    bad.push_back(
        band_text("hmc acceptance", hmc.report.acceptance, 0.93, 0.05));
  }
  if (!in_band(rwmh.report.acceptance, 0.247, 0.03)) {
    bad.push_back(
        band_text("rwmh acceptance", rwmh.report.acceptance, 0.247, 0.03));
  }
  if (!(tau_hmc < tau_rwmh)) {
    bad.push_back("hmc tau-coordinate IAT " + num(tau_hmc) +
                  " not below rwmh " + num(tau_rwmh));
  }
  if (!(eps_hmc > eps_rwmh && eps_hmc > eps_twalk)) {
    bad.push_back("hmc ess/s " + num(eps_hmc) + " not greatest (rwmh " +
                  num(eps_rwmh) + ", twalk " + num(eps_twalk) + ")");
  }

  std::string detail;
  if (bad.empty()) {
    detail = "hmc acc " + num(hmc.report.acceptance) + ", rwmh acc " +
             num(rwmh.report.acceptance) + ", IAT(tau) " + num(tau_hmc) +
             " vs " + num(tau_rwmh) + ", ess/s " + num(eps_hmc) + "/" +
             num(eps_rwmh) + "/" + num(eps_twalk);
  } else {
    for (std::size_t i = 0; i < bad.size(); ++i) {
      if (i) detail += "; ";
      detail += bad[i];
    }
  }
  report(10, "eight schools comparative study", bad.empty(), detail);
}

// ---- criterion 11: IAT estimator ----

void criterion_iat() {
  Rng rng(4);
  Vec white(200000);
  for (double& v : white) v = rng.normal();
  const double tau_white = iat(white);

  Rng rng2(5);
  Vec chain(500000);
  const double phi = 0.5;
  const double s = std::sqrt(1.0 - phi * phi);
  chain[0] = rng2.normal();
  for (std::size_t t = 1; t < chain.size(); ++t) {
    chain[t] = phi * chain[t - 1] + s * rng2.normal();
  }
  const double tau_ar = iat(chain);

  const bool pass = in_band(tau_white, 1.0, 0.05) && in_band(tau_ar, 3.0, 0.2);
  report(11, "IAT estimator hits known autocorrelation times", pass,
         "white noise " + num(tau_white) + " vs 1 +/- 0.05, AR(1) " +
             num(tau_ar) + " vs 3 +/- 0.2");
}

// ---- criterion 12: determinism ----

std::string slurp(const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "rb");
  if (!f) return "";
  std::string out;
  char buf[65536];
  std::size_t got;
  while ((got = std::fread(buf, 1, sizeof(buf), f)) > 0) out.append(buf, got);
  std::fclose(f);
  return out;
}

void criterion_determinism() {
  ExperimentSpec spec = preset_specs("gamma")[0];
  spec.out = "acceptance_scratch/det_a";
  const RunResult a = run(spec);
  spec.out = "acceptance_scratch/det_b";
  const RunResult b = run(spec);
  const std::string bytes_a = slurp(a.trace_path);
  const std::string bytes_b = slurp(b.trace_path);
  const bool pass = !bytes_a.empty() && bytes_a == bytes_b;
  report(12, "preset reruns write byte-identical traces", pass,
         "gamma hmc preset, " + std::to_string(bytes_a.size()) +
             " bytes each");
  std::error_code ec;
  std::filesystem::remove_all("acceptance_scratch", ec);
}

}  // namespace

int main() {
  criterion_gradients();
  criterion_reversibility();
  criterion_symplecticity();
  criterion_orders();
  criterion_exact_flow();
  criterion_gamma();
  criterion_degenerate();
  criterion_binormal();
  criterion_mixture();
  criterion_eight_schools();
  criterion_iat();
  criterion_determinism();

  if (failures == 0) {
    std::printf("all 12 criteria passed\n");
    return 0;
  }
  std::printf("%d of 12 criteria failed\n", failures);
  return 1;
}
