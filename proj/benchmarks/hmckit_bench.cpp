// Microbenchmarks for the hot paths: target evaluations, integrator steps,
// whole-chain throughput, and the two heaviest diagnostics.

#include <benchmark/benchmark.h>

#include <cmath>

#include "hmckit/diagnostics.hpp"
#include "hmckit/dynamics.hpp"
#include "hmckit/rng.hpp"
#include "hmckit/samplers.hpp"
#include "hmckit/target_model.hpp"

using namespace hmckit;

namespace {

Vec center_point(const TargetModel& model) {
  if (model.name == "gamma51") return {4.0};
  if (model.name == "mixture") return {-4.0, -4.0};
  return Vec(static_cast<std::size_t>(model.dim), 0.5);
}

void bm_potential(benchmark::State& state, const TargetModel& model) {
  const Vec q = center_point(model);
  for (auto _ : state) {
    benchmark::DoNotOptimize(model.potential(q));
  }
}

void bm_gradient(benchmark::State& state, const TargetModel& model) {
  const Vec q = center_point(model);
  for (auto _ : state) {
    benchmark::DoNotOptimize(model.gradient(q));
  }
}

void bm_leapfrog_step(benchmark::State& state) {
  const TargetModel model = make_binormal();
  const MassMatrix mass = MassMatrix::identity(2);
  PhaseState s{{0.4, -0.2}, {0.3, 0.9}};
  for (auto _ : state) {
    auto out = leapfrog_step(model, s, 0.15, mass);
    benchmark::DoNotOptimize(out);
  }
}

void bm_integrate_trajectory(benchmark::State& state) {
  const TargetModel model = make_binormal();
  const MassMatrix mass = MassMatrix::identity(2);
  const PhaseState s{{0.4, -0.2}, {0.3, 0.9}};
  for (auto _ : state) {
    auto out = integrate(model, s, 0.15, 35, mass);
    benchmark::DoNotOptimize(out);
  }
  state.SetItemsProcessed(state.iterations() * 35);
}

void bm_hmc(benchmark::State& state) {
  const TargetModel model = make_binormal();
  HmcConfig cfg;
  cfg.epsilon = 0.15;
  cfg.steps = 35;
  cfg.n = static_cast<int>(state.range(0));
  cfg.seed = 1;
  for (auto _ : state) {
    Trace t = hmc_sample(model, cfg, {-7.0, -7.0});
    benchmark::DoNotOptimize(t.states.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void bm_rwmh(benchmark::State& state) {
  const TargetModel model = make_binormal();
  RwmhConfig cfg;
  cfg.sigma = 0.15;
  cfg.n = static_cast<int>(state.range(0));
  cfg.seed = 2;
  for (auto _ : state) {
    Trace t = rwmh_sample(model, cfg, {-7.0, -7.0});
    benchmark::DoNotOptimize(t.states.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void bm_twalk(benchmark::State& state) {
  const TargetModel model = make_binormal();
  TwalkConfig cfg;
  cfg.x0 = {-7.0, -7.0};
  cfg.x0p = {-6.5, -6.5};
  cfg.n = static_cast<int>(state.range(0));
  cfg.seed = 3;
  for (auto _ : state) {
    Trace t = twalk_sample(model, cfg);
    benchmark::DoNotOptimize(t.states.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

Vec ar1_series(std::size_t n) {
  Rng rng(7);
  Vec x(n);
  x[0] = rng.normal();
  const double s = std::sqrt(0.75);
  for (std::size_t t = 1; t < n; ++t) x[t] = 0.5 * x[t - 1] + s * rng.normal();
  return x;
}

void bm_iat(benchmark::State& state) {
  const Vec x = ar1_series(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(iat(x));
  }
}

void bm_detect_burnin(benchmark::State& state) {
  Vec x = ar1_series(static_cast<std::size_t>(state.range(0)));
  for (std::size_t i = 0; i < 200 && i < x.size(); ++i) {
    x[i] += static_cast<double>(200 - i);  // transient to detect
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(detect_burnin(x));
  }
}

BENCHMARK_CAPTURE(bm_potential, gamma51, make_gamma51());
BENCHMARK_CAPTURE(bm_potential, binormal, make_binormal());
BENCHMARK_CAPTURE(bm_potential, mixture, make_mixture());
BENCHMARK_CAPTURE(bm_potential, eightschools, make_eight_schools());
BENCHMARK_CAPTURE(bm_gradient, gamma51, make_gamma51());
BENCHMARK_CAPTURE(bm_gradient, binormal, make_binormal());
BENCHMARK_CAPTURE(bm_gradient, mixture, make_mixture());
BENCHMARK_CAPTURE(bm_gradient, eightschools, make_eight_schools());
BENCHMARK(bm_leapfrog_step);
BENCHMARK(bm_integrate_trajectory);
BENCHMARK(bm_hmc)->Arg(1000);
BENCHMARK(bm_rwmh)->Arg(10000);
BENCHMARK(bm_twalk)->Arg(10000);
BENCHMARK(bm_iat)->Arg(100000);
BENCHMARK(bm_detect_burnin)->Arg(20000);

}  // namespace

BENCHMARK_MAIN();
