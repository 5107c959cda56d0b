#include "corrard/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "corrard/errors.hpp"

namespace corrard {

namespace {

constexpr double kRelativePivotFloor = 1e-12;
constexpr double kSymmetryTol = 1e-10;

void check_finite(const DenseMatrix& m) {
  if (!m.allFinite()) throw Error("matrix has non-finite entries");
}

}  // namespace

void check_symmetric(const DenseMatrix& m) {
  if (m.rows() != m.cols()) {
    throw DimensionMismatch("matrix is " + std::to_string(m.rows()) + "x" +
                            std::to_string(m.cols()) + ", expected square");
  }
  const double norm_inf =
      m.rows() == 0 ? 0.0 : m.cwiseAbs().rowwise().sum().maxCoeff();
  const double asym =
      m.rows() == 0 ? 0.0 : (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > kSymmetryTol * norm_inf) {
    throw DimensionMismatch("matrix is not symmetric (max asymmetry " +
                            std::to_string(asym) + ")");
  }
}

SpdFactor::SpdFactor(const DenseMatrix& m) {
  if (m.rows() != m.cols()) {
    throw DimensionMismatch("SPD factorization needs a square matrix");
  }
  check_finite(m);
  if (m.rows() == 0) return;
  const double max_diag = m.diagonal().maxCoeff();
  if (!(max_diag > 0.0)) throw NotSPD("largest diagonal entry is not positive");

  llt_.compute(m);
  if (llt_.info() != Eigen::Success) {
    throw NotSPD("Cholesky factorization hit a non-positive pivot");
  }
  // Pivots of the factorization are the squared diagonal of L.
  const auto l_diag = llt_.matrixLLT().diagonal();
  const double floor = kRelativePivotFloor * max_diag;
  for (Eigen::Index i = 0; i < l_diag.size(); ++i) {
    const double pivot = l_diag[i] * l_diag[i];
    if (!(pivot >= floor)) {
      throw NotSPD("pivot " + std::to_string(i) + " is below " +
                   std::to_string(kRelativePivotFloor) + " * max diagonal");
    }
  }
}

DenseVector SpdFactor::solve(const DenseVector& b) const {
  if (b.size() != dim()) {
    throw DimensionMismatch("rhs has length " + std::to_string(b.size()) +
                            ", matrix dimension is " + std::to_string(dim()));
  }
  if (dim() == 0) return DenseVector();
  return llt_.solve(b);
}

DenseVector SpdFactor::inverse_diagonal() const {
  const Eigen::Index n = dim();
  if (n == 0) return DenseVector();
  // M^{-1} = L^{-T} L^{-1}, so diag(M^{-1})_i is the squared norm of
  // column i of L^{-1}. That inverse is lower triangular, so a block of its
  // columns starting at j only needs the trailing factor L[j:, j:].
  constexpr Eigen::Index kBlock = 64;
  const DenseMatrix& llt = llt_.matrixLLT();
  DenseVector out(n);
  for (Eigen::Index j = 0; j < n; j += kBlock) {
    const Eigen::Index b = std::min(kBlock, n - j);
    const Eigen::Index m = n - j;
    DenseMatrix cols = DenseMatrix::Identity(m, b);
    llt.bottomRightCorner(m, m).triangularView<Eigen::Lower>().solveInPlace(cols);
    out.segment(j, b) = cols.colwise().squaredNorm().transpose();
  }
  return out;
}

DenseVector spd_solve(const DenseMatrix& m, const DenseVector& b) {
  check_symmetric(m);
  if (b.size() != m.rows()) {
    throw DimensionMismatch("rhs has length " + std::to_string(b.size()) +
                            ", matrix is " + std::to_string(m.rows()) + "x" +
                            std::to_string(m.cols()));
  }
  if (!b.allFinite()) throw Error("rhs has non-finite entries");
  return SpdFactor(m).solve(b);
}

DenseVector spd_inverse_diagonal(const DenseMatrix& m) {
  check_symmetric(m);
  return SpdFactor(m).inverse_diagonal();
}

}  // namespace corrard
