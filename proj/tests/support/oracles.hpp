#pragma once

// Reference computations used only by tests. Everything here is written
// from the defining formulas with plain loops so that it shares no code
// path with the library.

#include <cmath>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "corrard/linalg.hpp"

namespace oracle {

using corrard::DenseMatrix;
using corrard::DenseVector;

/// Gaussian elimination with partial pivoting on a copy of [m | b].
inline DenseMatrix eliminate(DenseMatrix m, DenseMatrix b) {
  const Eigen::Index n = m.rows();
  for (Eigen::Index col = 0; col < n; ++col) {
    Eigen::Index piv = col;
    for (Eigen::Index r = col + 1; r < n; ++r) {
      if (std::abs(m(r, col)) > std::abs(m(piv, col))) piv = r;
    }
    m.row(col).swap(m.row(piv));
    b.row(col).swap(b.row(piv));
    for (Eigen::Index r = col + 1; r < n; ++r) {
      const double f = m(r, col) / m(col, col);
      for (Eigen::Index c = col; c < n; ++c) m(r, c) -= f * m(col, c);
      for (Eigen::Index c = 0; c < b.cols(); ++c) b(r, c) -= f * b(col, c);
    }
  }
  DenseMatrix x(n, b.cols());
  for (Eigen::Index c = 0; c < b.cols(); ++c) {
    for (Eigen::Index r = n - 1; r >= 0; --r) {
      double s = b(r, c);
      for (Eigen::Index k = r + 1; k < n; ++k) s -= m(r, k) * x(k, c);
      x(r, c) = s / m(r, r);
    }
  }
  return x;
}

inline DenseVector solve(const DenseMatrix& m, const DenseVector& b) {
  return eliminate(m, b);
}

inline DenseMatrix inverse(const DenseMatrix& m) {
  return eliminate(m, DenseMatrix::Identity(m.rows(), m.cols()));
}

inline DenseMatrix random_matrix(Eigen::Index rows, Eigen::Index cols,
                                 std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  DenseMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = normal(rng);
  return m;
}

inline DenseVector random_vector(Eigen::Index n, std::mt19937_64& rng) {
  return random_matrix(n, 1, rng);
}

/// G^T G + lambda I.
inline DenseMatrix random_spd(Eigen::Index n, double lambda, std::mt19937_64& rng) {
  const DenseMatrix g = random_matrix(n, n, rng);
  DenseMatrix m = g.transpose() * g;
  m += lambda * DenseMatrix::Identity(n, n);
  return m;
}

/// J(w) = sum_n exp(-(t_n - x_n w)^2 / 2h) - 1/2 sum_d a_d w_d^2 by loops.
inline double penalized_correntropy(const DenseMatrix& X, const DenseVector& t,
                                    const DenseVector& w, const DenseVector& a,
                                    double h) {
  double j = 0.0;
  for (Eigen::Index n = 0; n < X.rows(); ++n) {
    double pred = 0.0;
    for (Eigen::Index d = 0; d < X.cols(); ++d) pred += X(n, d) * w[d];
    const double e = t[n] - pred;
    j += std::exp(-e * e / (2.0 * h));
  }
  for (Eigen::Index d = 0; d < w.size(); ++d) j -= 0.5 * a[d] * w[d] * w[d];
  return j;
}

/// Central-difference gradient of J.
inline DenseVector fd_gradient(const DenseMatrix& X, const DenseVector& t,
                               const DenseVector& w, const DenseVector& a, double h,
                               double step = 1e-6) {
  DenseVector g(w.size());
  for (Eigen::Index d = 0; d < w.size(); ++d) {
    DenseVector hi = w, lo = w;
    hi[d] += step;
    lo[d] -= step;
    g[d] = (penalized_correntropy(X, t, hi, a, h) -
            penalized_correntropy(X, t, lo, a, h)) / (2.0 * step);
  }
  return g;
}

/// Second central differences of -J.
inline DenseMatrix fd_negative_hessian(const DenseMatrix& X, const DenseVector& t,
                                       const DenseVector& w, const DenseVector& a,
                                       double h, double step = 1e-3) {
  const Eigen::Index k = w.size();
  DenseMatrix H(k, k);
  auto J = [&](const DenseVector& v) { return penalized_correntropy(X, t, v, a, h); };
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) {
      DenseVector pp = w, pm = w, mp = w, mm = w;
      pp[i] += step; pp[j] += step;
      pm[i] += step; pm[j] -= step;
      mp[i] -= step; mp[j] += step;
      mm[i] -= step; mm[j] -= step;
      H(i, j) = -(J(pp) - J(pm) - J(mp) + J(mm)) / (4.0 * step * step);
    }
  }
  return H;
}

/// Exhaustive maximization of J for D = 2 over the lattice
/// {-range, -range + step, ..., range}^2.
inline DenseVector grid_search_2d(const DenseMatrix& X, const DenseVector& t,
                                  const DenseVector& a, double h,
                                  double range = 3.0, double step = 1e-3) {
  const auto half = static_cast<long>(std::llround(range / step));
  const Eigen::Index n = X.rows();
  std::vector<double> resid(static_cast<std::size_t>(n));
  double best = -1e300;
  DenseVector arg(2);
  const double inv2h = 1.0 / (2.0 * h);
  for (long i = -half; i <= half; ++i) {
    const double w1 = static_cast<double>(i) * step;
    for (Eigen::Index r = 0; r < n; ++r) resid[static_cast<std::size_t>(r)] = t[r] - X(r, 0) * w1;
    const double pen1 = 0.5 * a[0] * w1 * w1;
    for (long k = -half; k <= half; ++k) {
      const double w2 = static_cast<double>(k) * step;
      double j = -pen1 - 0.5 * a[1] * w2 * w2;
      for (Eigen::Index r = 0; r < n; ++r) {
        const double e = resid[static_cast<std::size_t>(r)] - X(r, 1) * w2;
        j += std::exp(-e * e * inv2h);
      }
      if (j > best) {
        best = j;
        arg << w1, w2;
      }
    }
  }
  return arg;
}

/// Two-pass Pearson correlation.
inline double correlation(const DenseVector& a, const DenseVector& b) {
  const auto n = static_cast<double>(a.size());
  double ma = 0, mb = 0;
  for (Eigen::Index i = 0; i < a.size(); ++i) { ma += a[i]; mb += b[i]; }
  ma /= n;
  mb /= n;
  double sab = 0, saa = 0, sbb = 0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

/// Least squares by normal equations through the elimination oracle.
inline DenseVector least_squares(const DenseMatrix& X, const DenseVector& t) {
  return solve(X.transpose() * X, X.transpose() * t);
}

}  // namespace oracle
