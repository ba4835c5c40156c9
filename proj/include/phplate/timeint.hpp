#pragma once

#include "phplate/assembly.hpp"
#include "phplate/linalg.hpp"

#include <functional>
#include <vector>

namespace phplate {

/// One Crank-Nicolson trajectory: uniform time grid, energy trace
/// H = e^T M e / 2, the per-step discrete power-balance residual
/// H_{n+1} - H_n - dt * mean(e)^T mean(load), and solver statistics.
struct Trajectory {
  std::vector<double> t;
  std::vector<double> energy;
  std::vector<double> power_residual; ///< size N (one per step)
  double max_solver_residual = 0.0;

  double max_abs_energy() const;
  double max_abs_power_residual() const;
};

/// Load vector at a given time, on the free dofs. A null function means the
/// unforced problem.
using LoadFn = std::function<VecX(double)>;

/// One Crank-Nicolson update: (M - dt/2 J) e_{n+1} = (M + dt/2 J) e_n
/// + dt/2 (load_n + load_{n+1}). `op` must factor (M - dt/2 J).
VecX cn_step(const SparseFactorization& op, const SpMat& M, const SpMat& J, const VecX& e_n,
             const VecX& load_n, const VecX& load_np1, double dt);

using StepObserver = std::function<void(Index step, double t, const VecX& e_free)>;

/// Integrate M de/dt = J e + F(t) from 0 to tf with N = round(tf/dt) uniform
/// Crank-Nicolson steps. The observer (optional) sees every accepted state,
/// including the initial one. Negative dt with negative tf integrates
/// backwards.
Trajectory integrate(const PlateSystem& system, const VecX& e0_free, const LoadFn& load,
                     double dt, double tf, const StepObserver& observer = {},
                     double solver_tol = 1e-9);

} // namespace phplate
