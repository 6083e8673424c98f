#include "hmckit/target_model.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>

#include "hmckit/errors.hpp"

namespace hmckit {

namespace {

constexpr double kTwoPi = 6.283185307179586476925287;

bool all_finite(const Vec& q) {
  return std::all_of(q.begin(), q.end(),
                     [](double v) { return std::isfinite(v); });
}

void require_dim(const char* model, const Vec& q, std::size_t d) {
  if (q.size() != d) {
    throw std::invalid_argument(std::string(model) + ": expected dimension " +
                                std::to_string(d) + ", got " +
                                std::to_string(q.size()));
  }
}

// One bivariate normal component with unit variances and off-diagonal
// correlation `off`. Only the three distinct entries of Sigma^{-1} and the
// log normalization are kept.
struct MixtureComponent {
  double log_w;
  double mu0, mu1;
  double inv_diag, inv_off;
  double log_norm;
};

MixtureComponent make_component(double w, double mu0, double mu1, double off) {
  const double det = 1.0 - off * off;
  MixtureComponent c;
  c.log_w = std::log(w);
  c.mu0 = mu0;
  c.mu1 = mu1;
  c.inv_diag = 1.0 / det;
  c.inv_off = -off / det;
  c.log_norm = -std::log(kTwoPi) - 0.5 * std::log(det);
  return c;
}

double component_log_density(const MixtureComponent& c, double d0, double d1) {
  const double quad =
      c.inv_diag * d0 * d0 + 2.0 * c.inv_off * d0 * d1 + c.inv_diag * d1 * d1;
  return c.log_norm - 0.5 * quad;
}

}  // namespace

TargetModel make_gamma51() {
  TargetModel m;
  m.name = "gamma51";
  m.dim = 1;
  m.in_support = [](const Vec& q) {
    return q.size() == 1 && std::isfinite(q[0]) && q[0] > 0.0;
  };
  m.potential = [](const Vec& q) {
    require_dim("gamma51", q, 1);
    if (!(q[0] > 0.0)) {
      throw OutOfSupportError("gamma51: potential requires q > 0");
    }
    return q[0] - 4.0 * std::log(q[0]);
  };
  m.gradient = [](const Vec& q) {
    require_dim("gamma51", q, 1);
    if (!(q[0] > 0.0)) {
      throw OutOfSupportError("gamma51: gradient requires q > 0");
    }
    return Vec{1.0 - 4.0 / q[0]};
  };
  return m;
}

TargetModel make_binormal() {
  const double rho = -0.85;
  const double det = 1.0 - rho * rho;
  const double inv_diag = 1.0 / det;
  const double inv_off = -rho / det;

  TargetModel m;
  m.name = "binormal";
  m.dim = 2;
  m.in_support = [](const Vec& q) { return q.size() == 2 && all_finite(q); };
  m.potential = [=](const Vec& q) {
    require_dim("binormal", q, 2);
    return 0.5 * (inv_diag * q[0] * q[0] + 2.0 * inv_off * q[0] * q[1] +
                  inv_diag * q[1] * q[1]);
  };
  m.gradient = [=](const Vec& q) {
    require_dim("binormal", q, 2);
    return Vec{inv_diag * q[0] + inv_off * q[1],
               inv_off * q[0] + inv_diag * q[1]};
  };
  return m;
}

TargetModel make_mixture() {
  const std::array<MixtureComponent, 2> cs = {
      make_component(0.4, -4.0, -4.0, 0.5),
      make_component(0.6, 5.0, 5.0, -0.3),
  };

  TargetModel m;
  m.name = "mixture";
  m.dim = 2;
  m.in_support = [](const Vec& q) { return q.size() == 2 && all_finite(q); };
  m.potential = [cs](const Vec& q) {
    require_dim("mixture", q, 2);
    const double l0 =
        cs[0].log_w + component_log_density(cs[0], q[0] - cs[0].mu0, q[1] - cs[0].mu1);
    const double l1 =
        cs[1].log_w + component_log_density(cs[1], q[0] - cs[1].mu0, q[1] - cs[1].mu1);
    // log-sum-exp: far from both modes the raw densities underflow to zero,
    // but the shifted sum keeps the potential finite.
    const double hi = std::max(l0, l1);
    return -(hi + std::log1p(std::exp(std::min(l0, l1) - hi)));
  };
  m.gradient = [cs](const Vec& q) {
    require_dim("mixture", q, 2);
    const double a0 = q[0] - cs[0].mu0, a1 = q[1] - cs[0].mu1;
    const double b0 = q[0] - cs[1].mu0, b1 = q[1] - cs[1].mu1;
    const double l0 = cs[0].log_w + component_log_density(cs[0], a0, a1);
    const double l1 = cs[1].log_w + component_log_density(cs[1], b0, b1);
    const double hi = std::max(l0, l1);
    const double w0 = std::exp(l0 - hi);
    const double w1 = std::exp(l1 - hi);
    const double r0 = w0 / (w0 + w1);
    const double r1 = w1 / (w0 + w1);
    // grad U = sum_i r_i Sigma_i^{-1} (q - mu_i), with responsibilities r_i
    // formed against the larger exponent so neither weight underflows.
    return Vec{
        r0 * (cs[0].inv_diag * a0 + cs[0].inv_off * a1) +
            r1 * (cs[1].inv_diag * b0 + cs[1].inv_off * b1),
        r0 * (cs[0].inv_off * a0 + cs[0].inv_diag * a1) +
            r1 * (cs[1].inv_off * b0 + cs[1].inv_diag * b1),
    };
  };
  return m;
}

TargetModel make_eight_schools(const EightSchoolsData& data) {
  if (data.y.size() != 8 || data.kappa.size() != 8) {
    throw std::invalid_argument("eightschools: expected 8 observations");
  }
  Vec inv_k2(8);
  for (std::size_t i = 0; i < 8; ++i) {
    if (!(data.kappa[i] > 0.0)) {
      throw std::invalid_argument("eightschools: kappa must be positive");
    }
    inv_k2[i] = 1.0 / (data.kappa[i] * data.kappa[i]);
  }
  const Vec y = data.y;

  TargetModel m;
  m.name = "eightschools";
  m.dim = 10;
  m.in_support = [](const Vec& q) { return q.size() == 10 && all_finite(q); };
  m.potential = [y, inv_k2](const Vec& q) {
    require_dim("eightschools", q, 10);
    const double mu = q[8];
    const double tau = q[9];
    double u = 0.5 * mu * mu + 0.5 * tau * tau;
    for (std::size_t i = 0; i < 8; ++i) {
      const double eta = q[i];
      const double resid = y[i] - (mu + tau * eta);
      u += 0.5 * eta * eta + 0.5 * resid * resid * inv_k2[i];
    }
    return u;
  };
  m.gradient = [y, inv_k2](const Vec& q) {
    require_dim("eightschools", q, 10);
    const double mu = q[8];
    const double tau = q[9];
    Vec g(10);
    double gmu = mu;
    double gtau = tau;
    for (std::size_t i = 0; i < 8; ++i) {
      const double eta = q[i];
      const double w = (y[i] - (mu + tau * eta)) * inv_k2[i];
      g[i] = eta - w * tau;
      gmu -= w;
      gtau -= w * eta;
    }
    g[8] = gmu;
    g[9] = gtau;
    return g;
  };
  return m;
}

TargetModel make_std_gaussian(int dim) {
  if (dim < 1) {
    throw std::invalid_argument("std_gaussian: dimension must be positive");
  }
  const std::size_t d = static_cast<std::size_t>(dim);
  TargetModel m;
  m.name = "stdnormal";
  m.dim = dim;
  m.in_support = [d](const Vec& q) { return q.size() == d && all_finite(q); };
  m.potential = [d](const Vec& q) {
    require_dim("stdnormal", q, d);
    double u = 0.0;
    for (double v : q) u += v * v;
    return 0.5 * u;
  };
  m.gradient = [d](const Vec& q) {
    require_dim("stdnormal", q, d);
    return q;
  };
  return m;
}

std::optional<TargetModel> find_model(const std::string& name) {
  if (name == "gamma51") return make_gamma51();
  if (name == "binormal") return make_binormal();
  if (name == "mixture") return make_mixture();
  if (name == "eightschools") return make_eight_schools();
  return std::nullopt;
}

std::vector<std::string> builtin_model_names() {
  return {"gamma51", "binormal", "mixture", "eightschools"};
}

double check_gradient(const TargetModel& model, const Vec& q, double h) {
  if (!(h > 0.0)) {
    throw std::invalid_argument("check_gradient: h must be positive");
  }
  if (!model.in_support(q)) {
    throw OutOfSupportError(model.name + ": check_gradient point outside support");
  }
  const Vec g = model.gradient(q);
  Vec qp = q;
  Vec qm = q;
  double worst = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    qp[i] = q[i] + h;
    qm[i] = q[i] - h;
    if (!model.in_support(qp) || !model.in_support(qm)) {
      throw OutOfSupportError(model.name +
                              ": finite difference leaves support at coordinate " +
                              std::to_string(i));
    }
    const double fd = (model.potential(qp) - model.potential(qm)) / (2.0 * h);
    const double err = std::abs(g[i] - fd) / std::max(1.0, std::abs(g[i]));
    worst = std::max(worst, err);
    qp[i] = q[i];
    qm[i] = q[i];
  }
  return worst;
}

}  // namespace hmckit
