#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hmckit/dynamics.hpp"
#include "hmckit/target_model.hpp"

namespace hmckit {

// A recorded chain. states holds n rows of dim doubles, row major;
// log_density[i] = -U(states row i); accepted[i] says whether the move that
// produced row i was accepted. A rejected row repeats the previous position
// bit for bit. The initial point is not a row; it is kept in the config
// snapshot together with every other parameter of the producing run.
struct Trace {
  std::string model;
  std::string sampler;
  int dim = 0;
  std::vector<double> states;
  std::vector<double> log_density;
  std::vector<std::uint8_t> accepted;
  std::vector<std::pair<std::string, std::string>> config;

  std::size_t size() const { return log_density.size(); }
  const double* row(std::size_t i) const {
    return states.data() + i * static_cast<std::size_t>(dim);
  }
  Vec column(int j) const;
};

// Hamiltonian Monte Carlo configuration. Random draws per iteration, in
// order: dim standard normals for the momentum, one uniform for the step
// size when epsilon_jitter > 0, and one uniform for the accept test (drawn
// every iteration, divergent trajectories included, so the stream position
// is a function of the iteration count alone).
struct HmcConfig {
  double epsilon = 0.1;
  int steps = 10;
  int n = 1000;
  std::uint64_t seed = 0;
  double epsilon_jitter = 0.0;      // step size uniform in eps * [1-j, 1+j]
  std::optional<MassMatrix> mass;   // identity when absent
};

// Trajectory generator used by hmc_sample to turn (q, p) into a proposal
// endpoint. The default is `steps` leapfrog steps of size eps.
using ProposalFlow = std::function<std::optional<PhaseState>(
    const TargetModel&, const PhaseState&, double eps, int steps,
    const MassMatrix&)>;

Trace hmc_sample(const TargetModel& model, const HmcConfig& cfg, const Vec& q0);

// Same algorithm with a caller-supplied flow in place of leapfrog. Used by
// tests to drive the sampler with the exact Gaussian flow.
Trace hmc_sample(const TargetModel& model, const HmcConfig& cfg, const Vec& q0,
                 const ProposalFlow& flow);

// Adapter: exact_gaussian_flow over total time eps * steps, for the
// isotropic Gaussian target with identity mass.
ProposalFlow exact_gaussian_proposal();

// Random walk Metropolis-Hastings with isotropic N(0, sigma^2 I) proposals.
// n counts MH iterations; the trace records every record_every-th state
// (floor(n / record_every) rows). Out-of-support proposals are rejected.
// Draws per iteration: dim normals, then one uniform.
struct RwmhConfig {
  double sigma = 1.0;
  int n = 1000;
  std::uint64_t seed = 0;
  int record_every = 1;
};

Trace rwmh_sample(const TargetModel& model, const RwmhConfig& cfg,
                  const Vec& q0);

// Two-point sampler with walk/traverse/hop/blow moves. The pair of starting
// points must differ in every coordinate. The trace records the primary
// point x each iteration; accepted reflects the move of whichever point was
// proposed.
struct TwalkConfig {
  Vec x0;
  Vec x0p;
  int n = 1000;
  std::uint64_t seed = 0;
  // walk, traverse, hop, blow
  std::array<double, 4> move_probs{0.4918, 0.4918, 0.0082, 0.0082};
  double a_w = 1.5;
  double a_t = 6.0;
  double n1 = 4.0;  // expected number of coordinates updated per move
};

Trace twalk_sample(const TargetModel& model, const TwalkConfig& cfg);

// Rows burnin, burnin + lag, burnin + 2 lag, ... of the input trace. The
// applied (burnin, lag) pair is appended to the config snapshot.
Trace thin(const Trace& trace, int burnin, int lag);

}  // namespace hmckit
