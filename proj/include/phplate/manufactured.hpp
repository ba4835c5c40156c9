#pragma once

#include "phplate/material.hpp"
#include "phplate/types.hpp"

#include <functional>

namespace phplate {

/// Closed-form co-energy fields and forcing of one test problem. The forcing
/// is separable, F(x, t) = spatial(x) * time_factor(t), which the drivers
/// exploit by assembling the spatial load once per run.
struct ExactSolution {
  MaterialParams params;
  bool mindlin = false;

  std::function<double(const Vec2&, double)> e_w;
  std::function<Vec2(const Vec2&, double)> grad_e_w;
  std::function<Vec2(const Vec2&, double)> e_theta; ///< Mindlin only
  std::function<Mat2(const Vec2&, double)> E_kappa; ///< symmetric
  std::function<Vec2(const Vec2&, double)> e_gamma; ///< Mindlin only

  std::function<double(const Vec2&)> f_spatial;
  std::function<Vec2(const Vec2&)> tau_spatial; ///< Mindlin only
  std::function<double(double)> time_factor;

  /// Static (time-independent) displacement and rotation of the Mindlin
  /// benchmark; exposed for cross-checks.
  std::function<double(const Vec2&)> w_static;
  std::function<Vec2(const Vec2&)> theta_static;
};

/// Dynamic extension of the clamped-plate polynomial benchmark: the static
/// pair (w_s, theta_s) times sin(t), with forcing recomputed from the strong
/// equations so it is exact for any admissible parameter set.
ExactSolution mindlin_exact(const MaterialParams& params = mindlin_params());

/// Simply supported thin-plate solution sin(pi x) sin(pi y) sin(t).
ExactSolution kirchhoff_exact(const MaterialParams& params = kirchhoff_params());

/// Residuals of the governing strong equations at random space-time samples,
/// with every differential operator applied by fourth-order finite
/// differences; this is the independent guard against typos in the
/// hand-coded derivatives. Residuals are scaled by the largest term
/// magnitude of the corresponding equation over the sample set.
struct ResidualReport {
  double max_scaled_residual = 0.0;
  int n_samples = 0;
};
ResidualReport strong_form_residuals(const ExactSolution& exact, int n_samples = 1000,
                                     unsigned seed = 12345);

} // namespace phplate
