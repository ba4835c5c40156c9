#pragma once

#include "phplate/types.hpp"

#include <memory>

namespace phplate {

/// Direct sparse LU with partial pivoting and fill-reducing ordering, plus a
/// residual policy: every solve measures ||Ax - b|| / ||b|| and runs one step
/// of iterative refinement when the first pass is not clean. The original
/// matrix is kept for the residual checks.
class SparseFactorization {
public:
  explicit SparseFactorization(const SpMat& A);

  Index rows() const { return A_.rows(); }

  /// Solve Ax = b; throws when the relative residual exceeds tol after
  /// refinement.
  VecX solve(const VecX& b, double tol = 1e-9) const;

  /// Relative residual of the most recent solve.
  double last_residual() const { return last_residual_; }

private:
  SpMat A_;
  std::shared_ptr<Eigen::SparseLU<SpMat>> lu_;
  mutable double last_residual_ = 0.0;
};

SparseFactorization lu_factor(const SpMat& A);

/// max |A_ij| of a sparse matrix.
double max_abs(const SpMat& A);

/// Structural residuals ||M - M^T||_max and ||J + J^T||_max, relative to the
/// matrices' own max-norms.
double symmetry_residual(const SpMat& M);
double skewness_residual(const SpMat& J);

} // namespace phplate
