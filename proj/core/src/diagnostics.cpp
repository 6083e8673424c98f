#include "hmckit/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>

#include "hmckit/errors.hpp"

namespace hmckit {

namespace {

double series_mean(const Vec& x) {
  return std::accumulate(x.begin(), x.end(), 0.0) /
         static_cast<double>(x.size());
}

// Centered sum of squares; the shared denominator of every rho_hat_k.
double centered_ss(const Vec& x, double mean) {
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  return ss;
}

// A chain coordinate that never moved has no autocorrelation structure.
// This must be detected by value equality, not by the centered sum of
// squares: rounding in the mean can leave a strictly positive ss (~1e-27)
// for a perfectly constant series.
bool is_constant(const Vec& x) {
  for (double v : x) {
    if (v != x.front()) return false;
  }
  return true;
}

double rho_at(const Vec& x, double mean, double ss, std::size_t k) {
  double c = 0.0;
  for (std::size_t t = 0; t + k < x.size(); ++t) {
    c += (x[t] - mean) * (x[t + k] - mean);
  }
  return c / ss;
}

// Quantile by linear interpolation between order statistics of a sorted
// sample: h = (n-1) p.
double quantile_sorted(const Vec& s, double p) {
  const double h = static_cast<double>(s.size() - 1) * p;
  const std::size_t lo = static_cast<std::size_t>(h);
  if (lo + 1 >= s.size()) return s.back();
  return s[lo] + (h - static_cast<double>(lo)) * (s[lo + 1] - s[lo]);
}

}  // namespace

Vec autocorrelation(const Vec& series, int max_lag) {
  if (max_lag < 0) {
    throw std::invalid_argument("autocorrelation: max_lag must be >= 0");
  }
  if (series.size() <= static_cast<std::size_t>(max_lag)) {
    throw std::invalid_argument("autocorrelation: series shorter than max_lag");
  }
  const double mean = series_mean(series);
  const double ss = centered_ss(series, mean);
  if (!(ss > 0.0) || is_constant(series)) {
    throw DegenerateSeriesError("autocorrelation: series has zero variance");
  }
  Vec rho(static_cast<std::size_t>(max_lag) + 1);
  for (int k = 0; k <= max_lag; ++k) {
    rho[static_cast<std::size_t>(k)] =
        rho_at(series, mean, ss, static_cast<std::size_t>(k));
  }
  return rho;
}

double iat(const Vec& series) {
  const std::size_t n = series.size();
  if (n < 2) throw std::invalid_argument("iat: series length must be >= 2");
  const double mean = series_mean(series);
  const double ss = centered_ss(series, mean);
  if (!(ss > 0.0) || is_constant(series)) {
    throw DegenerateSeriesError("iat: series has zero variance");
  }

  // Pair sums are computed lazily; chains truncate after a few multiples of
  // the true autocorrelation time, long before the lag range runs out.
  double tau = -1.0;
  for (std::size_t m = 0;; ++m) {
    const std::size_t k_even = 2 * m;
    const std::size_t k_odd = 2 * m + 1;
    if (k_odd >= n) break;  // cannot form the next pair
    const double gamma =
        rho_at(series, mean, ss, k_even) + rho_at(series, mean, ss, k_odd);
    if (!(gamma > 0.0)) break;
    tau += 2.0 * gamma;
  }
  return std::max(tau, 1.0);
}

int detect_burnin(const Vec& series, const BurninOptions& opt) {
  if (opt.window < 1) {
    throw std::invalid_argument("detect_burnin: window must be positive");
  }
  if (!(opt.c > 0.0)) {
    throw std::invalid_argument("detect_burnin: c must be positive");
  }
  const std::size_t n = series.size();
  const std::size_t w = static_cast<std::size_t>(opt.window);
  if (n < 4 * w || n < 8) {
    throw std::invalid_argument(
        "detect_burnin: series must be at least 4 windows long");
  }

  const std::size_t lq = n / 4;  // final quarter
  const std::size_t q0 = n - lq;
  double m_star = 0.0;
  for (std::size_t i = q0; i < n; ++i) m_star += series[i];
  m_star /= static_cast<double>(lq);
  double ss = 0.0;
  for (std::size_t i = q0; i < n; ++i) {
    ss += (series[i] - m_star) * (series[i] - m_star);
  }
  const double s_star = std::sqrt(ss / static_cast<double>(lq - 1));

  // Least squares slope of the final quarter against its index. A chain
  // still climbing at the end has no stationary band to enter.
  const double t_bar = static_cast<double>(lq - 1) / 2.0;
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < lq; ++i) {
    const double dt = static_cast<double>(i) - t_bar;
    num += dt * (series[q0 + i] - m_star);
    den += dt * dt;
  }
  const double slope = num / den;
  if (!(std::abs(slope) <= s_star / static_cast<double>(lq))) {
    throw NotConvergedError(
        "detect_burnin: series still trending over its final quarter");
  }

  const double lo = m_star - opt.c * s_star;
  const double hi = m_star + opt.c * s_star;
  double window_sum = 0.0;
  for (std::size_t i = 0; i < w; ++i) window_sum += series[i];
  for (std::size_t start = 0; start + w <= n; ++start) {
    const double wm = window_sum / static_cast<double>(w);
    if (wm >= lo && wm <= hi) return static_cast<int>(start);
    if (start + w < n) {
      window_sum += series[start + w] - series[start];
    }
  }
  throw NotConvergedError(
      "detect_burnin: no window mean enters the stationary band");
}

double acceptance_rate(const Trace& trace) {
  if (trace.size() == 0) {
    throw std::invalid_argument("acceptance_rate: empty trace");
  }
  std::size_t count = 0;
  for (std::uint8_t a : trace.accepted) count += a;
  return static_cast<double>(count) / static_cast<double>(trace.size());
}

std::vector<DimSummary> summarize(const Trace& trace) {
  const std::size_t n = trace.size();
  if (n < 2) {
    throw std::invalid_argument("summarize: need at least two rows");
  }
  std::vector<DimSummary> out(static_cast<std::size_t>(trace.dim));
  for (int j = 0; j < trace.dim; ++j) {
    Vec col = trace.column(j);
    const double mean = series_mean(col);
    double ss = 0.0;
    for (double v : col) ss += (v - mean) * (v - mean);
    DimSummary& s = out[static_cast<std::size_t>(j)];
    s.mean = mean;
    s.variance = ss / static_cast<double>(n - 1);
    std::sort(col.begin(), col.end());
    s.q025 = quantile_sorted(col, 0.025);
    s.q500 = quantile_sorted(col, 0.5);
    s.q975 = quantile_sorted(col, 0.975);
  }
  return out;
}

std::vector<double> mode_occupancy(const Trace& trace,
                                   const std::vector<Vec>& centers,
                                   double radius, int burnin) {
  if (!(radius > 0.0)) {
    throw std::invalid_argument("mode_occupancy: radius must be positive");
  }
  if (burnin < 0 || static_cast<std::size_t>(burnin) >= trace.size()) {
    throw std::invalid_argument("mode_occupancy: burnin out of range");
  }
  for (const Vec& c : centers) {
    if (c.size() != static_cast<std::size_t>(trace.dim)) {
      throw std::invalid_argument("mode_occupancy: center dimension mismatch");
    }
  }
  const std::size_t n = trace.size();
  const std::size_t from = static_cast<std::size_t>(burnin);
  const double r2 = radius * radius;
  std::vector<double> occ(centers.size(), 0.0);
  for (std::size_t i = from; i < n; ++i) {
    const double* row = trace.row(i);
    for (std::size_t c = 0; c < centers.size(); ++c) {
      double d2 = 0.0;
      for (std::size_t j = 0; j < centers[c].size(); ++j) {
        const double diff = row[j] - centers[c][j];
        d2 += diff * diff;
      }
      if (d2 <= r2) occ[c] += 1.0;
    }
  }
  const double denom = static_cast<double>(n - from);
  for (double& v : occ) v /= denom;
  return occ;
}

namespace {

// Per-coordinate IATs of the post burn-in chain. Fewer than 4 rows left
// cannot support the estimator; every coordinate then reports 1. A constant
// coordinate (every proposal rejected) has no defined autocorrelation, so it
// also reports the floor value and the caller's warning flags the chain.
Vec post_burnin_iats(const Trace& trace, int burnin) {
  const std::size_t n = trace.size();
  const std::size_t from = static_cast<std::size_t>(burnin);
  const std::size_t remaining = n - from;
  Vec taus(static_cast<std::size_t>(trace.dim), 1.0);
  if (remaining < 4) return taus;
  for (int j = 0; j < trace.dim; ++j) {
    Vec col(remaining);
    for (std::size_t i = 0; i < remaining; ++i) {
      col[i] = trace.row(from + i)[static_cast<std::size_t>(j)];
    }
    try {
      taus[static_cast<std::size_t>(j)] = iat(col);
    } catch (const DegenerateSeriesError&) {
      taus[static_cast<std::size_t>(j)] = 1.0;
    }
  }
  return taus;
}

}  // namespace

double ess(const Trace& trace, int burnin) {
  const std::size_t n = trace.size();
  if (n == 0) throw std::invalid_argument("ess: empty trace");
  if (burnin < 0 || static_cast<std::size_t>(burnin) > n) {
    throw std::invalid_argument("ess: burnin out of range");
  }
  const std::size_t remaining = n - static_cast<std::size_t>(burnin);
  if (remaining == 0) return 0.0;
  const Vec taus = post_burnin_iats(trace, burnin);
  const double tau = *std::max_element(taus.begin(), taus.end());
  return static_cast<double>(remaining) / std::max(tau, 1.0);
}

DiagnosticsReport diagnose_trace(const Trace& trace, std::optional<int> burnin,
                                 std::optional<int> lag,
                                 const BurninOptions& opt) {
  const std::size_t n = trace.size();
  if (n == 0) throw std::invalid_argument("diagnose: empty trace");

  DiagnosticsReport rep;
  rep.model = trace.model;
  rep.sampler = trace.sampler;
  rep.n = static_cast<int>(n);
  rep.dim = trace.dim;
  rep.acceptance = acceptance_rate(trace);

  if (burnin) {
    if (*burnin < 0 || static_cast<std::size_t>(*burnin) >= n) {
      throw std::invalid_argument("diagnose: burnin out of range");
    }
    rep.burnin = *burnin;
  } else {
    rep.burnin = detect_burnin(trace.log_density, opt);
    rep.burnin_auto = true;
  }

  rep.iat_per_dim = post_burnin_iats(trace, rep.burnin);
  rep.monitored_dim = static_cast<int>(
      std::max_element(rep.iat_per_dim.begin(), rep.iat_per_dim.end()) -
      rep.iat_per_dim.begin());
  rep.iat_monitored = rep.iat_per_dim[static_cast<std::size_t>(rep.monitored_dim)];
  rep.ess_value = static_cast<double>(n - static_cast<std::size_t>(rep.burnin)) /
                  std::max(rep.iat_monitored, 1.0);

  if (lag) {
    if (*lag < 1) throw std::invalid_argument("diagnose: lag must be >= 1");
    rep.lag = *lag;
  } else {
    rep.lag = static_cast<int>(std::ceil(rep.iat_monitored));
    rep.lag_auto = true;
  }

  const Trace post = thin(trace, rep.burnin, rep.lag);
  if (post.size() >= 2) rep.post_summary = summarize(post);

  if (n >= 1000) {
    bool any = false;
    for (std::size_t i = 0; i < 1000; ++i) {
      if (trace.accepted[i]) {
        any = true;
        break;
      }
    }
    if (!any) {
      rep.warning = "no accepted move in the first 1000 iterations";
    }
  }
  return rep;
}

}  // namespace hmckit
