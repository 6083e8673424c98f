#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "hmckit/errors.hpp"
#include "hmckit/format.hpp"
#include "hmckit/rng.hpp"
#include "hmckit/samplers.hpp"

namespace hmckit {

// Two-point sampler. Each iteration picks one of four moves (walk,
// traverse, hop, blow) and proposes an update of one of the two points,
// using the other as a companion. Coordinates enter a proposal
// independently with probability min(d, n1)/d; the selected set is phi.
// Move shapes and Hastings terms follow the published construction:
//
//   walk      y_j = x_j + (x_j - x'_j) z_j,  z_j = (a/(1+a))(a u^2 + 2u - 1)
//             symmetric; ratio exp(U(x) - U(y)); proposal must stay
//             coordinate-distinct from the companion
//   traverse  y_j = x'_j + beta (x'_j - x_j), beta from the two-branch power
//             density with parameter a_t; ratio gains beta^(nphi - 2)
//   hop       y_j = x_j + (sigma/1) z_j with sigma = max_phi |x_j - x'_j|/3,
//             Gaussian z; asymmetric, ratio uses the forward and reverse
//             proposal densities over the phi coordinates
//   blow      y_j = x'_j + sigma z_j with sigma = max_phi |x_j - x'_j|,
//             centered at the companion; asymmetric like hop
//
// Non-selected coordinates keep their current values. The two points must
// differ in every coordinate at the start; moves keep that property with
// probability one.

namespace {

struct Proposal {
  Vec y;
  bool valid = false;   // in support, scales positive, distinctness kept
  double log_hastings = 0.0;  // log of the proposal density ratio
  int nphi = 0;
};

class TwalkKernels {
 public:
  TwalkKernels(const TargetModel& model, const TwalkConfig& cfg, Rng& rng)
      : model_(model),
        rng_(rng),
        d_(static_cast<std::size_t>(model.dim)),
        a_w_(cfg.a_w),
        a_t_(cfg.a_t),
        p_phi_(std::min(static_cast<double>(model.dim), cfg.n1) /
               static_cast<double>(model.dim)),
        phi_(d_, 0) {}

  // phi_ gets one uniform per coordinate on every call.
  int draw_phi() {
    int nphi = 0;
    for (std::size_t i = 0; i < d_; ++i) {
      phi_[i] = rng_.uniform() < p_phi_ ? 1 : 0;
      nphi += phi_[i];
    }
    return nphi;
  }

  Proposal walk(const Vec& cur, const Vec& other) {
    Proposal prop;
    prop.nphi = draw_phi();
    prop.y = cur;
    const double scale = a_w_ / (1.0 + a_w_);
    for (std::size_t i = 0; i < d_; ++i) {
      if (!phi_[i]) continue;
      const double u = rng_.uniform();
      const double z = scale * (a_w_ * u * u + 2.0 * u - 1.0);
      prop.y[i] = cur[i] + (cur[i] - other[i]) * z;
    }
    if (!model_.in_support(prop.y)) return prop;
    for (std::size_t i = 0; i < d_; ++i) {
      if (!(std::abs(prop.y[i] - other[i]) > 0.0)) return prop;
    }
    prop.valid = true;
    return prop;
  }

  Proposal traverse(const Vec& cur, const Vec& other) {
    const double branch = rng_.uniform();
    const double u = rng_.uniform();
    const double beta = branch < (a_t_ - 1.0) / (2.0 * a_t_)
                            ? std::pow(u, 1.0 / (a_t_ + 1.0))
                            : std::pow(u, 1.0 / (1.0 - a_t_));
    Proposal prop;
    prop.nphi = draw_phi();
    prop.y = cur;
    for (std::size_t i = 0; i < d_; ++i) {
      if (phi_[i]) prop.y[i] = other[i] + beta * (other[i] - cur[i]);
    }
    if (!(beta > 0.0) || !model_.in_support(prop.y)) return prop;
    prop.valid = true;
    // Reflection through the companion scales nphi coordinates by beta;
    // the proposal density ratio leaves beta^(nphi - 2).
    prop.log_hastings =
        prop.nphi == 0 ? 0.0 : (prop.nphi - 2) * std::log(beta);
    return prop;
  }

  Proposal hop(const Vec& cur, const Vec& other) {
    Proposal prop;
    prop.nphi = draw_phi();
    prop.y = cur;
    const double sigma_fwd = max_phi_gap(cur, other) / 3.0;
    if (prop.nphi == 0 || !(sigma_fwd > 0.0)) return prop;
    for (std::size_t i = 0; i < d_; ++i) {
      if (phi_[i]) prop.y[i] = cur[i] + sigma_fwd * rng_.normal();
    }
    if (!model_.in_support(prop.y)) return prop;
    const double sigma_rev = max_phi_gap(prop.y, other) / 3.0;
    if (!(sigma_rev > 0.0)) return prop;
    double sq = 0.0;  // same squared displacements forward and back
    for (std::size_t i = 0; i < d_; ++i) {
      if (phi_[i]) sq += (prop.y[i] - cur[i]) * (prop.y[i] - cur[i]);
    }
    prop.valid = true;
    prop.log_hastings = neg_log_gauss(prop.nphi, sigma_fwd, sq) -
                        neg_log_gauss(prop.nphi, sigma_rev, sq);
    return prop;
  }

  Proposal blow(const Vec& cur, const Vec& other) {
    Proposal prop;
    prop.nphi = draw_phi();
    prop.y = cur;
    const double sigma_fwd = max_phi_gap(cur, other);
    if (prop.nphi == 0 || !(sigma_fwd > 0.0)) return prop;
    for (std::size_t i = 0; i < d_; ++i) {
      if (phi_[i]) prop.y[i] = other[i] + sigma_fwd * rng_.normal();
    }
    if (!model_.in_support(prop.y)) return prop;
    const double sigma_rev = max_phi_gap(prop.y, other);
    if (!(sigma_rev > 0.0)) return prop;
    double sq_fwd = 0.0;  // displacements from the companion, each way
    double sq_rev = 0.0;
    for (std::size_t i = 0; i < d_; ++i) {
      if (!phi_[i]) continue;
      sq_fwd += (prop.y[i] - other[i]) * (prop.y[i] - other[i]);
      sq_rev += (cur[i] - other[i]) * (cur[i] - other[i]);
    }
    prop.valid = true;
    prop.log_hastings = neg_log_gauss(prop.nphi, sigma_fwd, sq_fwd) -
                        neg_log_gauss(prop.nphi, sigma_rev, sq_rev);
    return prop;
  }

 private:
  double max_phi_gap(const Vec& a, const Vec& b) const {
    double m = 0.0;
    for (std::size_t i = 0; i < d_; ++i) {
      if (phi_[i]) m = std::max(m, std::abs(a[i] - b[i]));
    }
    return m;
  }

  // -log of an isotropic Gaussian over the phi coordinates, constants
  // shared between forward and reverse dropped.
  static double neg_log_gauss(int nphi, double sigma, double sq) {
    return nphi * std::log(sigma) + 0.5 * sq / (sigma * sigma);
  }

  const TargetModel& model_;
  Rng& rng_;
  const std::size_t d_;
  const double a_w_;
  const double a_t_;
  const double p_phi_;
  std::vector<std::uint8_t> phi_;
};

void validate_twalk_config(const TargetModel& model, const TwalkConfig& cfg) {
  if (cfg.n < 1) throw std::invalid_argument("twalk: n must be positive");
  if (!(cfg.a_w > 0.0)) throw std::invalid_argument("twalk: a_w must be positive");
  if (!(cfg.a_t > 1.0)) throw std::invalid_argument("twalk: a_t must exceed 1");
  if (!(cfg.n1 > 0.0)) throw std::invalid_argument("twalk: n1 must be positive");
  double sum = 0.0;
  for (double p : cfg.move_probs) {
    if (!(p >= 0.0)) {
      throw std::invalid_argument("twalk: move probabilities must be >= 0");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw std::invalid_argument("twalk: move probabilities must sum to 1");
  }
  const std::size_t d = static_cast<std::size_t>(model.dim);
  if (cfg.x0.size() != d || cfg.x0p.size() != d) {
    throw std::invalid_argument("twalk: initial point dimension mismatch");
  }
  if (!model.in_support(cfg.x0) || !model.in_support(cfg.x0p)) {
    throw OutOfSupportError("twalk: initial point outside support");
  }
  for (std::size_t i = 0; i < d; ++i) {
    if (!(std::abs(cfg.x0[i] - cfg.x0p[i]) > 0.0)) {
      throw std::invalid_argument(
          "twalk: initial points must differ in every coordinate");
    }
  }
}

}  // namespace

Trace twalk_sample(const TargetModel& model, const TwalkConfig& cfg) {
  // Gradient-free: only the potential and support predicate are required.
  if (model.dim < 1 || !model.potential || !model.in_support) {
    throw std::invalid_argument("twalk: incomplete target model");
  }
  validate_twalk_config(model, cfg);

  const std::size_t d = static_cast<std::size_t>(model.dim);
  Rng rng(cfg.seed);
  TwalkKernels kernels(model, cfg, rng);

  Vec x = cfg.x0;
  Vec xp = cfg.x0p;
  double ux = model.potential(x);
  double uxp = model.potential(xp);

  // Cumulative move probabilities: walk, traverse, hop, blow.
  double cum[4];
  double acc = 0.0;
  for (int k = 0; k < 4; ++k) {
    acc += cfg.move_probs[static_cast<std::size_t>(k)];
    cum[k] = acc;
  }
  cum[3] = 1.0;  // guard against rounding in the sum

  Trace out;
  out.model = model.name;
  out.sampler = "twalk";
  out.dim = model.dim;
  out.states.reserve(static_cast<std::size_t>(cfg.n) * d);
  out.log_density.reserve(cfg.n);
  out.accepted.reserve(cfg.n);
  out.config = {{"model", model.name},
                {"sampler", "twalk"},
                {"n", std::to_string(cfg.n)},
                {"seed", std::to_string(cfg.seed)},
                {"init", join_csv(cfg.x0)},
                {"init2", join_csv(cfg.x0p)},
                {"move_probs", join_csv({cfg.move_probs.begin(), cfg.move_probs.end()})},
                {"a_w", format_g17(cfg.a_w)},
                {"a_t", format_g17(cfg.a_t)},
                {"n1", format_g17(cfg.n1)}};

  for (int iter = 0; iter < cfg.n; ++iter) {
    const double kercall = rng.uniform();
    const double dir = rng.uniform();

    const bool move_primary = dir >= 0.5;
    Vec& cur = move_primary ? x : xp;
    const Vec& other = move_primary ? xp : x;
    double& u_cur = move_primary ? ux : uxp;

    Proposal prop;
    if (kercall < cum[0]) {
      prop = kernels.walk(cur, other);
    } else if (kercall < cum[1]) {
      prop = kernels.traverse(cur, other);
    } else if (kercall < cum[2]) {
      prop = kernels.hop(cur, other);
    } else {
      prop = kernels.blow(cur, other);
    }

    const double u = rng.uniform();
    bool accept = false;
    if (prop.valid) {
      const double u_prop = model.potential(prop.y);
      if (std::isfinite(u_prop)) {
        const double r = std::exp(u_cur - u_prop + prop.log_hastings);
        accept = u <= std::min(1.0, r);
        if (accept) {
          cur = prop.y;
          u_cur = u_prop;
        }
      }
    }

    out.states.insert(out.states.end(), x.begin(), x.end());
    out.log_density.push_back(-ux);
    out.accepted.push_back(accept ? 1 : 0);
  }
  return out;
}

}  // namespace hmckit
