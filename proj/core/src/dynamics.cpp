#include "hmckit/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>

#include <Eigen/Dense>

#include "hmckit/errors.hpp"

namespace hmckit {

namespace {

bool all_finite(const Vec& v) {
  return std::all_of(v.begin(), v.end(),
                     [](double x) { return std::isfinite(x); });
}

void require_state(const TargetModel& model, const PhaseState& s,
                   const MassMatrix& mass) {
  if (s.q.size() != s.p.size()) {
    throw std::invalid_argument("phase state: q and p dimensions differ");
  }
  if (static_cast<int>(s.q.size()) != model.dim) {
    throw std::invalid_argument("phase state: dimension does not match model");
  }
  if (mass.dim() != model.dim) {
    throw std::invalid_argument("mass matrix: dimension does not match model");
  }
}

bool usable(const TargetModel& model, const Vec& q) {
  return all_finite(q) && model.in_support(q);
}

}  // namespace

MassMatrix::MassMatrix(Vec diag) : diag_(std::move(diag)) {
  if (diag_.empty()) {
    throw std::invalid_argument("mass matrix: diagonal must be non-empty");
  }
  for (double m : diag_) {
    if (!std::isfinite(m) || m <= 0.0) {
      throw std::invalid_argument("mass matrix: entries must be positive");
    }
  }
}

MassMatrix MassMatrix::identity(int dim) {
  if (dim < 1) {
    throw std::invalid_argument("mass matrix: dimension must be positive");
  }
  return MassMatrix(Vec(static_cast<std::size_t>(dim), 1.0));
}

std::optional<Integrator> parse_integrator(const std::string& name) {
  if (name == "leapfrog") return Integrator::leapfrog;
  if (name == "euler") return Integrator::euler;
  if (name == "symplectic-euler") return Integrator::symplectic_euler;
  return std::nullopt;
}

std::string integrator_name(Integrator method) {
  switch (method) {
    case Integrator::leapfrog: return "leapfrog";
    case Integrator::euler: return "euler";
    case Integrator::symplectic_euler: return "symplectic-euler";
  }
  return "unknown";
}

double kinetic_energy(const Vec& p, const MassMatrix& mass) {
  if (p.size() != mass.diag().size()) {
    throw std::invalid_argument("kinetic energy: dimension mismatch");
  }
  double k = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    k += p[i] * p[i] / (2.0 * mass.diag()[i]);
  }
  return k;
}

double hamiltonian(const TargetModel& model, const PhaseState& s,
                   const MassMatrix& mass) {
  require_state(model, s, mass);
  if (!model.in_support(s.q)) {
    throw OutOfSupportError(model.name + ": hamiltonian at q outside support");
  }
  return kinetic_energy(s.p, mass) + model.potential(s.q);
}

std::optional<PhaseState> leapfrog_step(const TargetModel& model,
                                        const PhaseState& s, double eps,
                                        const MassMatrix& mass) {
  require_state(model, s, mass);
  if (!usable(model, s.q) || !all_finite(s.p)) return std::nullopt;

  const std::size_t d = s.q.size();
  const Vec& m = mass.diag();

  Vec g = model.gradient(s.q);
  PhaseState out;
  out.p.resize(d);
  out.q.resize(d);
  for (std::size_t i = 0; i < d; ++i) {
    out.p[i] = s.p[i] - 0.5 * eps * g[i];  // half kick
  }
  for (std::size_t i = 0; i < d; ++i) {
    out.q[i] = s.q[i] + eps * out.p[i] / m[i];  // drift
  }
  if (!usable(model, out.q)) return std::nullopt;
  g = model.gradient(out.q);
  for (std::size_t i = 0; i < d; ++i) {
    out.p[i] -= 0.5 * eps * g[i];  // closing half kick
  }
  if (!all_finite(out.p)) return std::nullopt;
  return out;
}

std::optional<PhaseState> euler_step(const TargetModel& model,
                                     const PhaseState& s, double eps,
                                     const MassMatrix& mass) {
  require_state(model, s, mass);
  if (!usable(model, s.q) || !all_finite(s.p)) return std::nullopt;

  const std::size_t d = s.q.size();
  const Vec& m = mass.diag();
  const Vec g = model.gradient(s.q);

  PhaseState out;
  out.q.resize(d);
  out.p.resize(d);
  for (std::size_t i = 0; i < d; ++i) {
    out.q[i] = s.q[i] + eps * s.p[i] / m[i];
    out.p[i] = s.p[i] - eps * g[i];
  }
  if (!usable(model, out.q) || !all_finite(out.p)) return std::nullopt;
  return out;
}

std::optional<PhaseState> symplectic_euler_step(const TargetModel& model,
                                                const PhaseState& s,
                                                double eps,
                                                const MassMatrix& mass) {
  require_state(model, s, mass);
  if (!usable(model, s.q) || !all_finite(s.p)) return std::nullopt;

  const std::size_t d = s.q.size();
  const Vec& m = mass.diag();
  const Vec g = model.gradient(s.q);

  PhaseState out;
  out.q.resize(d);
  out.p.resize(d);
  for (std::size_t i = 0; i < d; ++i) {
    out.p[i] = s.p[i] - eps * g[i];
    out.q[i] = s.q[i] + eps * out.p[i] / m[i];
  }
  if (!usable(model, out.q) || !all_finite(out.p)) return std::nullopt;
  return out;
}

std::optional<PhaseState> integrate(const TargetModel& model, PhaseState s,
                                    double eps, int steps,
                                    const MassMatrix& mass,
                                    Integrator method) {
  if (steps < 0) {
    throw std::invalid_argument("integrate: steps must be non-negative");
  }
  require_state(model, s, mass);
  for (int k = 0; k < steps; ++k) {
    std::optional<PhaseState> next;
    switch (method) {
      case Integrator::leapfrog:
        next = leapfrog_step(model, s, eps, mass);
        break;
      case Integrator::euler:
        next = euler_step(model, s, eps, mass);
        break;
      case Integrator::symplectic_euler:
        next = symplectic_euler_step(model, s, eps, mass);
        break;
    }
    if (!next) return std::nullopt;
    s = std::move(*next);
  }
  return s;
}

namespace {

PhaseState flipped(PhaseState s) {
  for (double& p : s.p) p = -p;
  return s;
}

PhaseState must_integrate(const TargetModel& model, const PhaseState& s,
                          double eps, int steps, const MassMatrix& mass,
                          Integrator method, const char* who) {
  auto end = integrate(model, s, eps, steps, mass, method);
  if (!end) {
    throw TrajectoryDivergedError(std::string(who) + ": trajectory diverged (" +
                                  model.name + ", eps=" + std::to_string(eps) +
                                  ", steps=" + std::to_string(steps) + ")");
  }
  return *end;
}

}  // namespace

double reversibility_defect(const TargetModel& model, const PhaseState& s,
                            double eps, int steps, const MassMatrix& mass,
                            Integrator method) {
  PhaseState fwd =
      must_integrate(model, s, eps, steps, mass, method, "reversibility_defect");
  PhaseState back = flipped(must_integrate(model, flipped(std::move(fwd)), eps,
                                           steps, mass, method,
                                           "reversibility_defect"));
  double defect = 0.0;
  for (std::size_t i = 0; i < s.q.size(); ++i) {
    defect = std::max(defect, std::abs(back.q[i] - s.q[i]));
    defect = std::max(defect, std::abs(back.p[i] - s.p[i]));
  }
  return defect;
}

double energy_drift(const TargetModel& model, const PhaseState& s, double eps,
                    int steps, const MassMatrix& mass, Integrator method) {
  const double h0 = hamiltonian(model, s, mass);
  const PhaseState end =
      must_integrate(model, s, eps, steps, mass, method, "energy_drift");
  return std::abs(hamiltonian(model, end, mass) - h0);
}

JacobianCheck check_step_jacobian(const TargetModel& model,
                                  const PhaseState& s, double eps,
                                  const MassMatrix& mass, Integrator method,
                                  double h) {
  require_state(model, s, mass);
  if (!(h > 0.0)) {
    throw std::invalid_argument("check_step_jacobian: h must be positive");
  }
  const int d = model.dim;
  const int n = 2 * d;

  auto step_at = [&](const PhaseState& x) {
    return must_integrate(model, x, eps, 1, mass, method,
                          "check_step_jacobian");
  };

  // Column k of M: central difference of the step map along phase
  // coordinate k, with coordinates ordered (q_1..q_d, p_1..p_d).
  Eigen::MatrixXd M(n, n);
  for (int k = 0; k < n; ++k) {
    PhaseState plus = s;
    PhaseState minus = s;
    double& vp = k < d ? plus.q[k] : plus.p[k - d];
    double& vm = k < d ? minus.q[k] : minus.p[k - d];
    vp += h;
    vm -= h;
    const PhaseState sp = step_at(plus);
    const PhaseState sm = step_at(minus);
    for (int r = 0; r < d; ++r) {
      M(r, k) = (sp.q[r] - sm.q[r]) / (2.0 * h);
      M(d + r, k) = (sp.p[r] - sm.p[r]) / (2.0 * h);
    }
  }

  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < d; ++i) {
    J(i, d + i) = 1.0;
    J(d + i, i) = -1.0;
  }

  JacobianCheck out;
  out.symplectic_defect = (M.transpose() * J * M - J).cwiseAbs().maxCoeff();
  out.det = M.determinant();
  return out;
}

PhaseState exact_gaussian_flow(const PhaseState& s, double t) {
  if (s.q.size() != s.p.size()) {
    throw std::invalid_argument("phase state: q and p dimensions differ");
  }
  const double c = std::cos(t);
  const double sn = std::sin(t);
  PhaseState out;
  out.q.resize(s.q.size());
  out.p.resize(s.p.size());
  for (std::size_t i = 0; i < s.q.size(); ++i) {
    out.q[i] = s.q[i] * c + s.p[i] * sn;
    out.p[i] = -s.q[i] * sn + s.p[i] * c;
  }
  return out;
}

}  // namespace hmckit
