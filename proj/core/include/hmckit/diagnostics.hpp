#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hmckit/samplers.hpp"

namespace hmckit {

// rho_hat_k for k = 0..max_lag with the biased normalization: one mean over
// the whole series, denominator sum (x_t - xbar)^2. rho_hat_0 == 1 always.
// Throws DegenerateSeriesError for a constant series.
Vec autocorrelation(const Vec& series, int max_lag);

// Integrated autocorrelation time by the initial positive sequence rule:
// tau_hat = -1 + 2 sum_{m=0..M} Gamma_m with Gamma_m = rho_2m + rho_2m+1,
// where M is the last index of the leading run of strictly positive pair
// sums. The estimate is floored at 1 (an uncorrelated series costs one draw
// per effective draw, never less).
double iat(const Vec& series);

struct BurninOptions {
  int window = 50;
  double c = 2.0;
};

// Smallest index n whose window mean lies inside the stationary band
// [m* - c s*, m* + c s*], with m*, s* the mean and sample deviation of the
// final quarter of the series. Rejects series that still trend at the end:
// the final-quarter least squares slope must satisfy |slope| <= s*/(len/4).
// Throws NotConvergedError when the guard fails or no window qualifies;
// requires length >= 4 * window.
int detect_burnin(const Vec& series, const BurninOptions& opt = {});

// Fraction of accepted flags over the whole trace.
double acceptance_rate(const Trace& trace);

struct DimSummary {
  double mean;
  double variance;  // unbiased, denominator n - 1
  double q025;
  double q500;
  double q975;
};

// Per-dimension mean, variance, and quantiles (linear interpolation between
// order statistics). Requires at least two rows.
std::vector<DimSummary> summarize(const Trace& trace);

// For each center, the fraction of rows (from `burnin` on) within Euclidean
// distance `radius`.
std::vector<double> mode_occupancy(const Trace& trace,
                                   const std::vector<Vec>& centers,
                                   double radius = 3.0, int burnin = 0);

// (n - burnin) / max(tau, 1) with tau the largest per-coordinate IAT of the
// post burn-in chain. Fewer than 4 remaining rows cannot support an IAT
// estimate; tau is then taken as 1.
double ess(const Trace& trace, int burnin);

struct DiagnosticsReport {
  std::string label;
  std::string model;
  std::string sampler;
  int n = 0;
  int dim = 0;
  double acceptance = 0.0;
  int burnin = 0;
  bool burnin_auto = false;
  Vec iat_per_dim;
  int monitored_dim = 0;      // coordinate with the largest IAT
  double iat_monitored = 1.0;
  int lag = 1;                // ceil(iat_monitored) when automatic
  bool lag_auto = false;
  double ess_value = 0.0;
  std::vector<DimSummary> post_summary;  // after burn-in and lag thinning
  double sampling_seconds = 0.0;
  double seconds_per_ess = 0.0;
  std::string warning;
};

// Full report for a trace. burnin and lag may be given explicitly; absent
// means automatic (detect_burnin on the log densities; lag = ceil(IAT)).
// Flags a divergence storm (no accepted move in the first 1000 rows of a
// trace at least that long) as a warning, not an error.
DiagnosticsReport diagnose_trace(const Trace& trace,
                                 std::optional<int> burnin = std::nullopt,
                                 std::optional<int> lag = std::nullopt,
                                 const BurninOptions& opt = {});

}  // namespace hmckit
