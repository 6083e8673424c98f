#pragma once

#include <optional>
#include <string>

#include "hmckit/target_model.hpp"

namespace hmckit {

// A point in phase space: position q and momentum p, equal dimensions.
struct PhaseState {
  Vec q;
  Vec p;
};

// Diagonal mass matrix. Entries must be strictly positive and finite.
class MassMatrix {
 public:
  explicit MassMatrix(Vec diag);
  static MassMatrix identity(int dim);

  const Vec& diag() const noexcept { return diag_; }
  int dim() const noexcept { return static_cast<int>(diag_.size()); }

 private:
  Vec diag_;
};

enum class Integrator { leapfrog, euler, symplectic_euler };

// Parses "leapfrog", "euler", "symplectic-euler".
std::optional<Integrator> parse_integrator(const std::string& name);
std::string integrator_name(Integrator method);

// sum_i p_i^2 / (2 m_i)
double kinetic_energy(const Vec& p, const MassMatrix& mass);

// H(q, p) = kinetic + U(q). Throws OutOfSupportError when q is outside the
// support of the model.
double hamiltonian(const TargetModel& model, const PhaseState& s,
                   const MassMatrix& mass);

// One integrator step of size eps >= 0. Returns nullopt when the step
// leaves the support or produces non-finite values; samplers treat that as
// a rejected proposal ("diverged"), never as an error.
//
// leapfrog (kick-drift-kick):
//   p_half = p - (eps/2) grad U(q)
//   q'     = q + eps * p_half / m
//   p'     = p_half - (eps/2) grad U(q')
std::optional<PhaseState> leapfrog_step(const TargetModel& model,
                                        const PhaseState& s, double eps,
                                        const MassMatrix& mass);

// Explicit Euler: q' = q + eps p / m and p' = p - eps grad U(q), both from
// the old state. First order, not symplectic; kept as the failure baseline.
std::optional<PhaseState> euler_step(const TargetModel& model,
                                     const PhaseState& s, double eps,
                                     const MassMatrix& mass);

// Symplectic Euler: p' = p - eps grad U(q), then q' = q + eps p' / m.
std::optional<PhaseState> symplectic_euler_step(const TargetModel& model,
                                                const PhaseState& s,
                                                double eps,
                                                const MassMatrix& mass);

// `steps` repeated integrator steps (steps >= 0; 0 is the identity).
std::optional<PhaseState> integrate(const TargetModel& model, PhaseState s,
                                    double eps, int steps,
                                    const MassMatrix& mass,
                                    Integrator method = Integrator::leapfrog);

// Integrate `steps` steps, flip the momentum, integrate `steps` more, flip
// again; returns the max-norm distance from the start over all phase
// coordinates. Exactly zero steps gives exactly zero. Throws
// TrajectoryDivergedError if any step diverges.
double reversibility_defect(const TargetModel& model, const PhaseState& s,
                            double eps, int steps, const MassMatrix& mass,
                            Integrator method = Integrator::leapfrog);

// |H(end) - H(start)| after `steps` steps. Throws TrajectoryDivergedError
// on divergence.
double energy_drift(const TargetModel& model, const PhaseState& s, double eps,
                    int steps, const MassMatrix& mass,
                    Integrator method = Integrator::leapfrog);

// Finite-difference Jacobian M of one integrator step at s, central
// differences with perturbation h on each phase coordinate (q first, then
// p). symplectic_defect is max |(M^T J M - J)_ij| for the canonical
// J = [[0, I], [-I, 0]]; det is det(M), which measures volume preservation.
struct JacobianCheck {
  double symplectic_defect;
  double det;
};

JacobianCheck check_step_jacobian(const TargetModel& model,
                                  const PhaseState& s, double eps,
                                  const MassMatrix& mass, Integrator method,
                                  double h = 1e-6);

// Exact Hamiltonian flow for U(q) = |q|^2 / 2 with identity mass:
// (q, p) -> (q cos t + p sin t, -q sin t + p cos t), applied elementwise.
// Test reference only; meaningless for other targets.
PhaseState exact_gaussian_flow(const PhaseState& s, double t);

}  // namespace hmckit
