#include "hmckit/samplers.hpp"

#include <cassert>
#include <cmath>
#include <cstddef>
#include <stdexcept>

#include "hmckit/errors.hpp"
#include "hmckit/format.hpp"
#include "hmckit/rng.hpp"

namespace hmckit {

Vec Trace::column(int j) const {
  if (j < 0 || j >= dim) {
    throw std::invalid_argument("trace column out of range");
  }
  const std::size_t n = size();
  Vec out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = states[i * static_cast<std::size_t>(dim) +
                    static_cast<std::size_t>(j)];
  }
  return out;
}

namespace {

void require_model(const TargetModel& model) {
  if (model.dim < 1 || !model.potential || !model.gradient ||
      !model.in_support) {
    throw std::invalid_argument("sampler: incomplete target model");
  }
}

void require_start(const TargetModel& model, const Vec& q0, const char* who) {
  if (q0.size() != static_cast<std::size_t>(model.dim)) {
    throw std::invalid_argument(std::string(who) +
                                ": initial point dimension mismatch");
  }
  if (!model.in_support(q0)) {
    throw OutOfSupportError(std::string(who) +
                            ": initial point outside support");
  }
}

void append_row(Trace& t, const Vec& q, double u, bool accepted) {
  t.states.insert(t.states.end(), q.begin(), q.end());
  t.log_density.push_back(-u);
  t.accepted.push_back(accepted ? 1 : 0);
}

}  // namespace

ProposalFlow exact_gaussian_proposal() {
  return [](const TargetModel&, const PhaseState& s, double eps, int steps,
            const MassMatrix&) -> std::optional<PhaseState> {
    return exact_gaussian_flow(s, eps * static_cast<double>(steps));
  };
}

Trace hmc_sample(const TargetModel& model, const HmcConfig& cfg,
                 const Vec& q0) {
  return hmc_sample(model, cfg, q0,
                    [](const TargetModel& m, const PhaseState& s, double eps,
                       int steps, const MassMatrix& mass) {
                      return integrate(m, s, eps, steps, mass,
                                       Integrator::leapfrog);
                    });
}

Trace hmc_sample(const TargetModel& model, const HmcConfig& cfg, const Vec& q0,
                 const ProposalFlow& flow) {
  require_model(model);
  require_start(model, q0, "hmc");
  if (!(cfg.epsilon > 0.0)) {
    throw std::invalid_argument("hmc: epsilon must be positive");
  }
  if (cfg.steps < 1) throw std::invalid_argument("hmc: steps must be positive");
  if (cfg.n < 1) throw std::invalid_argument("hmc: n must be positive");
  if (cfg.epsilon_jitter < 0.0 || cfg.epsilon_jitter >= 1.0) {
    throw std::invalid_argument("hmc: epsilon_jitter must lie in [0, 1)");
  }
  const MassMatrix mass =
      cfg.mass ? *cfg.mass : MassMatrix::identity(model.dim);
  if (mass.dim() != model.dim) {
    throw std::invalid_argument("hmc: mass dimension does not match model");
  }

  const std::size_t d = q0.size();
  Vec sqrt_m(d);
  for (std::size_t i = 0; i < d; ++i) sqrt_m[i] = std::sqrt(mass.diag()[i]);

  Rng rng(cfg.seed);
  Vec q = q0;
  double u_cur = model.potential(q);

  Trace out;
  out.model = model.name;
  out.sampler = "hmc";
  out.dim = model.dim;
  out.states.reserve(static_cast<std::size_t>(cfg.n) * d);
  out.log_density.reserve(cfg.n);
  out.accepted.reserve(cfg.n);
  out.config = {{"model", model.name},
                {"sampler", "hmc"},
                {"n", std::to_string(cfg.n)},
                {"seed", std::to_string(cfg.seed)},
                {"epsilon", format_g17(cfg.epsilon)},
                {"steps", std::to_string(cfg.steps)},
                {"epsilon_jitter", format_g17(cfg.epsilon_jitter)},
                {"mass", join_csv(mass.diag())},
                {"init", join_csv(q0)}};

  PhaseState state;
  state.p.resize(d);
  for (int iter = 0; iter < cfg.n; ++iter) {
    state.q = q;
    for (std::size_t i = 0; i < d; ++i) {
      state.p[i] = sqrt_m[i] * rng.normal();  // p ~ N(0, diag(mass))
    }
    double eps = cfg.epsilon;
    if (cfg.epsilon_jitter > 0.0) {
      eps = cfg.epsilon *
            (1.0 - cfg.epsilon_jitter + 2.0 * cfg.epsilon_jitter * rng.uniform());
    }

    const double h0 = kinetic_energy(state.p, mass) + u_cur;
    const auto end = flow(model, state, eps, cfg.steps, mass);
    const double u = rng.uniform();

    bool accept = false;
    if (end) {
      // Proposal is (q*, -p*). The kinetic term is even in p, so flipping
      // cannot change the energy; keep the explicit check honest.
      Vec p_star = end->p;
      for (double& pi : p_star) pi = -pi;
      const double k_star = kinetic_energy(p_star, mass);
      assert(k_star == kinetic_energy(end->p, mass));
      const double u_star = model.potential(end->q);
      const double h1 = k_star + u_star;
      if (std::isfinite(h1)) {
        const double r = std::exp(h0 - h1);
        accept = u <= std::min(1.0, r);
        if (accept) {
          q = end->q;
          u_cur = u_star;
        }
      }
    }
    append_row(out, q, u_cur, accept);
  }
  return out;
}

Trace rwmh_sample(const TargetModel& model, const RwmhConfig& cfg,
                  const Vec& q0) {
  require_model(model);
  require_start(model, q0, "rwmh");
  if (!(cfg.sigma > 0.0)) {
    throw std::invalid_argument("rwmh: sigma must be positive");
  }
  if (cfg.n < 1) throw std::invalid_argument("rwmh: n must be positive");
  if (cfg.record_every < 1) {
    throw std::invalid_argument("rwmh: record_every must be positive");
  }

  const std::size_t d = q0.size();
  Rng rng(cfg.seed);
  Vec q = q0;
  Vec prop(d);
  double u_cur = model.potential(q);

  const int rows = cfg.n / cfg.record_every;
  Trace out;
  out.model = model.name;
  out.sampler = "rwmh";
  out.dim = model.dim;
  out.states.reserve(static_cast<std::size_t>(rows) * d);
  out.log_density.reserve(rows);
  out.accepted.reserve(rows);
  out.config = {{"model", model.name},
                {"sampler", "rwmh"},
                {"n", std::to_string(cfg.n)},
                {"seed", std::to_string(cfg.seed)},
                {"sigma", format_g17(cfg.sigma)},
                {"record_every", std::to_string(cfg.record_every)},
                {"init", join_csv(q0)}};

  for (int iter = 1; iter <= cfg.n; ++iter) {
    for (std::size_t i = 0; i < d; ++i) {
      prop[i] = q[i] + cfg.sigma * rng.normal();
    }
    const double u = rng.uniform();
    bool accept = false;
    if (model.in_support(prop)) {
      const double u_prop = model.potential(prop);
      if (std::isfinite(u_prop)) {
        const double r = std::exp(u_cur - u_prop);
        accept = u <= std::min(1.0, r);
        if (accept) {
          q = prop;
          u_cur = u_prop;
        }
      }
    }
    if (iter % cfg.record_every == 0) append_row(out, q, u_cur, accept);
  }
  return out;
}

Trace thin(const Trace& trace, int burnin, int lag) {
  if (burnin < 0) throw std::invalid_argument("thin: burnin must be >= 0");
  if (static_cast<std::size_t>(burnin) >= trace.size()) {
    throw std::invalid_argument("thin: burnin must be smaller than the trace");
  }
  if (lag < 1) throw std::invalid_argument("thin: lag must be >= 1");

  Trace out;
  out.model = trace.model;
  out.sampler = trace.sampler;
  out.dim = trace.dim;
  out.config = trace.config;
  out.config.emplace_back("burnin", std::to_string(burnin));
  out.config.emplace_back("lag", std::to_string(lag));

  const std::size_t d = static_cast<std::size_t>(trace.dim);
  for (std::size_t i = static_cast<std::size_t>(burnin); i < trace.size();
       i += static_cast<std::size_t>(lag)) {
    const double* r = trace.row(i);
    out.states.insert(out.states.end(), r, r + d);
    out.log_density.push_back(trace.log_density[i]);
    out.accepted.push_back(trace.accepted[i]);
  }
  return out;
}

}  // namespace hmckit
