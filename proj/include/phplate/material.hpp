#pragma once

#include "phplate/types.hpp"

#include <stdexcept>

namespace phplate {

/// Physical parameters of the plate. Defaults are the Mindlin test values;
/// kirchhoff_params() gives the thin-plate set.
struct MaterialParams {
  double young_modulus = 1.0;   ///< E_Y [Pa]
  double poisson_ratio = 0.3;   ///< nu [-]
  double density = 1.0;         ///< rho [kg/m^3]
  double thickness = 0.1;       ///< b [m]
  double shear_correction = 5.0 / 6.0; ///< k_sc [-]

  void validate() const {
    if (!(young_modulus > 0.0)) throw std::invalid_argument("MaterialParams: E_Y must be > 0");
    if (!(density > 0.0)) throw std::invalid_argument("MaterialParams: rho must be > 0");
    if (!(thickness > 0.0)) throw std::invalid_argument("MaterialParams: b must be > 0");
    if (!(poisson_ratio > -1.0 && poisson_ratio < 0.5))
      throw std::invalid_argument("MaterialParams: nu must be in (-1, 1/2)");
    if (!(shear_correction > 0.0))
      throw std::invalid_argument("MaterialParams: k_sc must be > 0");
  }

  /// Bending rigidity E_Y b^3 / (12 (1 - nu^2)).
  double bending_rigidity() const {
    return young_modulus * thickness * thickness * thickness /
           (12.0 * (1.0 - poisson_ratio * poisson_ratio));
  }

  /// Shear stiffness E_Y b k_sc / (2 (1 + nu)).
  double shear_stiffness() const {
    return young_modulus * thickness * shear_correction / (2.0 * (1.0 + poisson_ratio));
  }
};

inline MaterialParams mindlin_params() { return MaterialParams{1.0, 0.3, 1.0, 0.1, 5.0 / 6.0}; }

inline MaterialParams kirchhoff_params() {
  return MaterialParams{136.0e9, 0.3, 5600.0, 0.001, 5.0 / 6.0};
}

/// Bending constitutive map D0 [(1-nu) K + nu tr(K) I]; accepts any 2x2
/// Eigen expression and extends naturally to non-symmetric tensors (needed
/// by the weak-symmetry formulation).
template <typename Derived>
Mat2 constitutive_bending(const Eigen::MatrixBase<Derived>& curvature,
                          const MaterialParams& p) {
  const double d0 = p.bending_rigidity();
  const double nu = p.poisson_ratio;
  return d0 * ((1.0 - nu) * curvature + nu * curvature.trace() * Mat2::Identity());
}

/// Inverse of constitutive_bending: K = 1/(D0 (1-nu)) [M - nu/(1+nu) tr(M) I].
template <typename Derived>
Mat2 constitutive_bending_inverse(const Eigen::MatrixBase<Derived>& moment,
                                  const MaterialParams& p) {
  const double d0 = p.bending_rigidity();
  const double nu = p.poisson_ratio;
  return (moment - nu / (1.0 + nu) * moment.trace() * Mat2::Identity()) /
         (d0 * (1.0 - nu));
}

template <typename Derived>
Vec2 constitutive_shear(const Eigen::MatrixBase<Derived>& strain, const MaterialParams& p) {
  return p.shear_stiffness() * strain;
}

template <typename Derived>
Vec2 constitutive_shear_inverse(const Eigen::MatrixBase<Derived>& stress,
                                const MaterialParams& p) {
  return stress / p.shear_stiffness();
}

} // namespace phplate
