#pragma once

#include "phplate/assembly.hpp"

namespace phplate::testing {

/// Brute-force dense assembly of the pH pair on small meshes, used as the
/// oracle for the production sparse assembly. Every weak-form term is
/// integrated with naive scalar loops, tensors are rebuilt as 2x2 matrices
/// at each quadrature point, and the constitutive maps are applied through
/// their operator form rather than precomputed component weights.
struct DenseSystem {
  MatX M, J;
};

DenseSystem oracle_assemble(const PlateSystem& system);

} // namespace phplate::testing
