#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "latred/errors.hpp"
#include "latred/matrix.hpp"

namespace latred {

struct QrFactors {
  Matrix q1;          // m x n, orthonormal columns
  UpperTriangular r;  // n x n, positive diagonal
};

/* Householder QR (Trefethen & Bau, Algorithm 10.1) of a full-column-rank
   m x n matrix, m >= n. The thin factor Q1 is formed explicitly by applying
   the stored reflectors to the leading columns of the identity, and the
   diagonal of R is normalized to be positive afterwards. */
inline QrFactors qr_factorize(const Matrix& a) {
  const std::size_t m = a.rows(), n = a.cols();
  if (n < 1 || m < n)
    throw DimensionError("qr_factorize: need rows >= cols >= 1");
  if (!a.all_finite())
    throw ParameterError("qr_factorize: input has non-finite entries");

  Matrix w = a;  // reduced in place
  const double anorm = frobenius_norm(a);
  std::vector<std::vector<double>> reflectors(n);

  for (std::size_t k = 0; k < n; ++k) {
    double norm_x = 0.0;
    for (std::size_t i = k; i < m; ++i) norm_x += w(i, k) * w(i, k);
    norm_x = std::sqrt(norm_x);

    std::vector<double> v(m - k, 0.0);
    for (std::size_t i = k; i < m; ++i) v[i - k] = w(i, k);
    v[0] += (v[0] >= 0.0 ? norm_x : -norm_x);
    double norm_v = 0.0;
    for (double t : v) norm_v += t * t;
    norm_v = std::sqrt(norm_v);
    if (norm_v > 0.0)
      for (double& t : v) t /= norm_v;

    for (std::size_t j = k; j < n; ++j) {
      double dot = 0.0;
      for (std::size_t i = k; i < m; ++i) dot += v[i - k] * w(i, j);
      for (std::size_t i = k; i < m; ++i) w(i, j) -= 2.0 * dot * v[i - k];
    }
    reflectors[k] = std::move(v);
  }

  UpperTriangular r(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) r(i, j) = w(i, j);

  const double rank_tol = 1e-12 * anorm;
  for (std::size_t i = 0; i < n; ++i)
    if (std::fabs(r(i, i)) <= rank_tol)
      throw RankDeficientError("qr_factorize: |r(" + std::to_string(i) + "," +
                               std::to_string(i) +
                               ")| below rank tolerance 1e-12*|A|_F");

  // Q1 = H_0 H_1 ... H_{n-1} [I_n; 0]
  Matrix q1(m, n);
  for (std::size_t j = 0; j < n; ++j) q1(j, j) = 1.0;
  for (std::size_t k2 = n; k2-- > 0;) {
    const std::vector<double>& v = reflectors[k2];
    for (std::size_t j = 0; j < n; ++j) {
      double dot = 0.0;
      for (std::size_t i = k2; i < m; ++i) dot += v[i - k2] * q1(i, j);
      for (std::size_t i = k2; i < m; ++i) q1(i, j) -= 2.0 * dot * v[i - k2];
    }
  }

  for (std::size_t i = 0; i < n; ++i)
    if (r(i, i) < 0.0) {
      for (std::size_t j = i; j < n; ++j) r(i, j) = -r(i, j);
      for (std::size_t t = 0; t < m; ++t) q1(t, i) = -q1(t, i);
    }
  return {std::move(q1), std::move(r)};
}

/* Two-row Givens rotation clearing the post-swap bulge at (k, k-1), where
   k in [1, n) names the lower row of the pair. The rotation G^T is applied
   to rows k-1 and k of R over columns k-1..n-1 and accumulated into Q from
   the right (columns k-1 and k), so Q_new R_new == Q_old R_old. After the
   call r(k, k-1) is exactly zero and r(k-1, k-1) >= 0. */
inline void apply_givens_rows(UpperTriangular& r, Matrix& q, std::size_t k) {
  const std::size_t n = r.n();
  if (k < 1 || k >= n)
    throw DimensionError("apply_givens_rows: pair index out of range");
  if (q.cols() != n)
    throw DimensionError("apply_givens_rows: Q column count mismatch");

  const double a = r(k - 1, k - 1);
  const double b = r(k, k - 1);
  const double h = std::hypot(a, b);
  if (h == 0.0) return;  // both entries zero: identity rotation
  const double c = a / h, s = b / h;

  for (std::size_t j = k - 1; j < n; ++j) {
    const double top = r(k - 1, j), bot = r(k, j);
    r(k - 1, j) = c * top + s * bot;
    r(k, j) = -s * top + c * bot;
  }
  r(k - 1, k - 1) = h;
  r(k, k - 1) = 0.0;

  for (std::size_t i = 0; i < q.rows(); ++i) {
    const double left = q(i, k - 1), right = q(i, k);
    q(i, k - 1) = c * left + s * right;
    q(i, k) = -s * left + c * right;
  }
}

// |A Z - Q R|_F, the factorization residual every reduction must preserve.
inline double residual_norm(const Matrix& a, const Matrix& q,
                            const UpperTriangular& r, const IntMatrix& z) {
  if (a.cols() != z.n() || q.cols() != r.n() || a.rows() != q.rows())
    throw DimensionError("residual_norm: dimensions disagree");
  const Matrix az = a * to_matrix(z);
  const Matrix qr = q * to_matrix(r);
  return frobenius_distance(az, qr);
}

}  // namespace latred
