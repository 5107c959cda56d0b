#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>

namespace corrard {

using DenseMatrix = Eigen::MatrixXd;
using DenseVector = Eigen::VectorXd;

/// Cholesky factor of a symmetric positive-definite matrix.
///
/// Factorization fails with NotSPD when any pivot is non-positive or falls
/// below 1e-12 times the largest diagonal entry. No jitter is applied here;
/// callers that want a regularized retry add it themselves.
class SpdFactor {
 public:
  explicit SpdFactor(const DenseMatrix& m);

  Eigen::Index dim() const noexcept { return llt_.matrixLLT().rows(); }

  DenseVector solve(const DenseVector& b) const;

  /// Diagonal of the inverse, computed from the triangular inverse of L.
  DenseVector inverse_diagonal() const;

 private:
  Eigen::LLT<DenseMatrix, Eigen::Lower> llt_;
};

/// Throws DimensionMismatch unless `m` is square and symmetric within
/// 1e-10 * ||m||_inf.
void check_symmetric(const DenseMatrix& m);

/// Solves m x = b for SPD m without forming an inverse.
DenseVector spd_solve(const DenseMatrix& m, const DenseVector& b);

DenseVector spd_inverse_diagonal(const DenseMatrix& m);

}  // namespace corrard
