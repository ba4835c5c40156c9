#include "phplate/timeint.hpp"

#include <cmath>
#include <stdexcept>

namespace phplate {

double Trajectory::max_abs_energy() const {
  double m = 0.0;
  for (double e : energy) m = std::max(m, std::abs(e));
  return m;
}

double Trajectory::max_abs_power_residual() const {
  double m = 0.0;
  for (double r : power_residual) m = std::max(m, std::abs(r));
  return m;
}

VecX cn_step(const SparseFactorization& op, const SpMat& M, const SpMat& J, const VecX& e_n,
             const VecX& load_n, const VecX& load_np1, double dt) {
  VecX rhs = M * e_n + (0.5 * dt) * (J * e_n) + (0.5 * dt) * (load_n + load_np1);
  return op.solve(rhs);
}

Trajectory integrate(const PlateSystem& sys, const VecX& e0, const LoadFn& load, double dt,
                     double tf, const StepObserver& observer, double solver_tol) {
  if (sys.free_dofs.empty())
    throw std::logic_error("integrate: apply_essential_bcs must run first");
  if (e0.size() != sys.n_free()) throw std::invalid_argument("integrate: bad state dimension");
  if (dt == 0.0) throw std::invalid_argument("integrate: dt must be nonzero");

  const Index n_steps = static_cast<Index>(std::llround(tf / dt));
  if (n_steps < 1) throw std::invalid_argument("integrate: tf/dt rounds to zero steps");
  if (std::abs(n_steps * dt - tf) > 1e-9 * std::abs(tf))
    throw std::invalid_argument("integrate: dt does not divide tf within rounding");

  const SpMat& M = sys.M_free;
  const SpMat& J = sys.J_free;
  SpMat lhs = M - (0.5 * dt) * J;
  SpMat rhs_op = M + (0.5 * dt) * J;
  SparseFactorization op = lu_factor(lhs);

  Trajectory traj;
  traj.t.reserve(static_cast<std::size_t>(n_steps) + 1);
  traj.energy.reserve(static_cast<std::size_t>(n_steps) + 1);
  traj.power_residual.reserve(static_cast<std::size_t>(n_steps));

  auto energy_of = [&M](const VecX& e) { return 0.5 * e.dot(M * e); };

  VecX e = e0;
  double t = 0.0;
  VecX load_n = load ? load(t) : VecX();
  traj.t.push_back(t);
  traj.energy.push_back(energy_of(e));
  if (observer) observer(0, t, e);

  for (Index step = 1; step <= n_steps; ++step) {
    const double t_next = step * dt;
    VecX rhs = rhs_op * e;
    VecX load_np1;
    if (load) {
      load_np1 = load(t_next);
      rhs += (0.5 * dt) * (load_n + load_np1);
    }
    VecX e_next = op.solve(rhs, solver_tol);
    traj.max_solver_residual = std::max(traj.max_solver_residual, op.last_residual());

    const double h_prev = traj.energy.back();
    const double h_next = energy_of(e_next);
    double balance = h_next - h_prev;
    if (load) {
      VecX e_mid = 0.5 * (e + e_next);
      VecX load_mid = 0.5 * (load_n + load_np1);
      balance -= dt * e_mid.dot(load_mid);
      load_n = std::move(load_np1);
    }
    traj.power_residual.push_back(balance);

    e = std::move(e_next);
    t = t_next;
    traj.t.push_back(t);
    traj.energy.push_back(h_next);
    if (observer) observer(step, t, e);
  }
  return traj;
}

} // namespace phplate
