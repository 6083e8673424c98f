#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace hmckit {

using Vec = std::vector<double>;

// A target distribution seen through its potential U(q) = -log density
// (up to an additive constant), the gradient of U, and a support predicate.
// potential and gradient throw OutOfSupportError outside the support;
// samplers call in_support first and treat out-of-support proposals as zero
// density. Users may fill these fields with their own evaluators; nothing
// below is specific to the built-in models.
struct TargetModel {
  std::string name;
  int dim = 0;
  std::function<double(const Vec&)> potential;
  std::function<Vec(const Vec&)> gradient;
  std::function<bool(const Vec&)> in_support;
};

// Observations for the 10-dimensional hierarchical school-effects posterior:
// eight effect estimates y_i with known scales kappa_i.
struct EightSchoolsData {
  Vec y = {2.8, 0.8, -0.3, 0.7, -0.1, 0.1, 1.8, 1.2};
  Vec kappa = {0.8, 0.5, 0.8, 0.6, 0.5, 0.6, 0.5, 0.4};
};

// Gamma(5,1) kernel on q > 0: U(q) = q - 4 ln q.
TargetModel make_gamma51();

// Bivariate normal kernel with unit variances and correlation -0.85:
// U(q) = q' Sigma^{-1} q / 2. Sigma^{-1} is computed once at construction.
TargetModel make_binormal();

// Two-component bivariate normal mixture, weights 0.4 and 0.6, means
// (-4,-4) and (5,5). Density evaluation goes through log-sum-exp so the
// potential stays finite far from both modes.
TargetModel make_mixture();

// Hierarchical school-effects posterior in the unconstrained
// parameterization (eta_1..eta_8, mu, tau); tau is a free real.
TargetModel make_eight_schools(const EightSchoolsData& data = {});

// Isotropic standard Gaussian in d dimensions, U(q) = |q|^2 / 2. Reference
// target for the integrator study and the exact-flow sampler checks.
TargetModel make_std_gaussian(int dim);

// Models addressable by name from the CLI and spec files:
// gamma51, binormal, mixture, eightschools.
std::optional<TargetModel> find_model(const std::string& name);
std::vector<std::string> builtin_model_names();

// Max over coordinates i of |gradient_i - fd_i| / max(1, |gradient_i|),
// where fd_i = (U(q + h e_i) - U(q - h e_i)) / (2h). Throws
// OutOfSupportError naming the coordinate whose perturbation leaves the
// support.
double check_gradient(const TargetModel& model, const Vec& q, double h);

}  // namespace hmckit
