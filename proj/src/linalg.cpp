#include "phplate/linalg.hpp"

#include <sstream>
#include <stdexcept>

namespace phplate {

SparseFactorization::SparseFactorization(const SpMat& A) : A_(A) {
  if (A.rows() != A.cols()) throw std::invalid_argument("lu_factor: matrix must be square");
  A_.makeCompressed();
  lu_ = std::make_shared<Eigen::SparseLU<SpMat>>();
  lu_->compute(A_);
  if (lu_->info() != Eigen::Success)
    throw std::runtime_error("lu_factor: factorization failed (singular or rank-deficient matrix)");
}

VecX SparseFactorization::solve(const VecX& b, double tol) const {
  if (b.size() != A_.rows())
    throw std::invalid_argument("solve: right-hand side dimension mismatch");
  VecX x = lu_->solve(b);
  const double bnorm = b.norm();
  if (bnorm == 0.0) {
    last_residual_ = 0.0;
    return VecX::Zero(b.size());
  }
  VecX r = b - A_ * x;
  double res = r.norm() / bnorm;
  if (res > 0.1 * tol) {
    x += lu_->solve(r);
    r = b - A_ * x;
    res = r.norm() / bnorm;
  }
  last_residual_ = res;
  if (!(res <= tol)) {
    std::ostringstream msg;
    msg << "solve: relative residual " << res << " exceeds tolerance " << tol;
    throw std::runtime_error(msg.str());
  }
  return x;
}

SparseFactorization lu_factor(const SpMat& A) { return SparseFactorization(A); }

double max_abs(const SpMat& A) {
  double m = 0.0;
  for (int k = 0; k < A.outerSize(); ++k)
    for (SpMat::InnerIterator it(A, k); it; ++it) m = std::max(m, std::abs(it.value()));
  return m;
}

double symmetry_residual(const SpMat& M) {
  SpMat D = SpMat(M - SpMat(M.transpose()));
  double denom = max_abs(M);
  return denom == 0.0 ? 0.0 : max_abs(D) / denom;
}

double skewness_residual(const SpMat& J) {
  SpMat S = SpMat(J + SpMat(J.transpose()));
  double denom = max_abs(J);
  return denom == 0.0 ? 0.0 : max_abs(S) / denom;
}

} // namespace phplate
