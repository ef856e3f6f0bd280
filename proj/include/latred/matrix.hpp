#pragma once

#include <cassert>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "latred/errors.hpp"

namespace latred {

// Dense real matrix, row-major.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), e_(rows * cols, fill) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) {
    assert(i < rows_ && j < cols_);
    return e_[i * cols_ + j];
  }
  double operator()(std::size_t i, std::size_t j) const {
    assert(i < rows_ && j < cols_);
    return e_[i * cols_ + j];
  }

  bool all_finite() const {
    for (double v : e_)
      if (!std::isfinite(v)) return false;
    return true;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> e_;
};

// Square upper-triangular factor with nonzero diagonal. Entries below the
// diagonal are stored so a column swap may leave a transient bulge at
// (k, k-1) until the next Givens rotation clears it.
class UpperTriangular {
 public:
  UpperTriangular() = default;
  explicit UpperTriangular(std::size_t n) : n_(n), e_(n * n, 0.0) {}

  std::size_t n() const { return n_; }

  double& operator()(std::size_t i, std::size_t j) {
    assert(i < n_ && j < n_);
    return e_[i * n_ + j];
  }
  double operator()(std::size_t i, std::size_t j) const {
    assert(i < n_ && j < n_);
    return e_[i * n_ + j];
  }

  // col_dst += c * col_src over rows 0..row_limit inclusive.
  void add_scaled_column(std::size_t dst, std::size_t src, double c,
                         std::size_t row_limit) {
    for (std::size_t t = 0; t <= row_limit; ++t)
      (*this)(t, dst) += c * (*this)(t, src);
  }

  // Swap columns j1 and j2 over rows 0..row_limit inclusive.
  void swap_columns(std::size_t j1, std::size_t j2, std::size_t row_limit) {
    for (std::size_t t = 0; t <= row_limit; ++t)
      std::swap((*this)(t, j1), (*this)(t, j2));
  }

  double abs_diag_product() const {
    double p = 1.0;
    for (std::size_t i = 0; i < n_; ++i) p *= std::fabs((*this)(i, i));
    return p;
  }

 private:
  std::size_t n_ = 0;
  std::vector<double> e_;
};

// Square integer matrix; every Z a reduction produces is unimodular.
class IntMatrix {
 public:
  IntMatrix() = default;
  explicit IntMatrix(std::size_t n) : n_(n), e_(n * n, 0) {}

  static IntMatrix identity(std::size_t n) {
    IntMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t n() const { return n_; }

  long long& operator()(std::size_t i, std::size_t j) {
    assert(i < n_ && j < n_);
    return e_[i * n_ + j];
  }
  long long operator()(std::size_t i, std::size_t j) const {
    assert(i < n_ && j < n_);
    return e_[i * n_ + j];
  }

  void add_scaled_column(std::size_t dst, std::size_t src, long long c) {
    for (std::size_t t = 0; t < n_; ++t) (*this)(t, dst) += c * (*this)(t, src);
  }

  void swap_columns(std::size_t j1, std::size_t j2) {
    for (std::size_t t = 0; t < n_; ++t)
      std::swap((*this)(t, j1), (*this)(t, j2));
  }

 private:
  std::size_t n_ = 0;
  std::vector<long long> e_;
};

inline Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows())
    throw DimensionError("matrix product: inner dimensions disagree");
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

inline std::vector<double> operator*(const Matrix& a,
                                     const std::vector<double>& x) {
  if (a.cols() != x.size())
    throw DimensionError("matrix-vector product: dimensions disagree");
  std::vector<double> y(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

// A^T x without forming the transpose.
inline std::vector<double> transpose_times(const Matrix& a,
                                           const std::vector<double>& x) {
  if (a.rows() != x.size())
    throw DimensionError("transpose-vector product: dimensions disagree");
  std::vector<double> y(a.cols(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) y[j] += a(i, j) * x[i];
  return y;
}

inline Matrix to_matrix(const UpperTriangular& r) {
  Matrix m(r.n(), r.n());
  for (std::size_t i = 0; i < r.n(); ++i)
    for (std::size_t j = 0; j < r.n(); ++j) m(i, j) = r(i, j);
  return m;
}

inline Matrix to_matrix(const IntMatrix& z) {
  Matrix m(z.n(), z.n());
  for (std::size_t i = 0; i < z.n(); ++i)
    for (std::size_t j = 0; j < z.n(); ++j)
      m(i, j) = static_cast<double>(z(i, j));
  return m;
}

inline double frobenius_norm(const Matrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

inline double frobenius_distance(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionError("frobenius distance: shapes disagree");
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const double d = a(i, j) - b(i, j);
      s += d * d;
    }
  return std::sqrt(s);
}

// Fraction-free Bareiss determinant over 128-bit intermediates.
// Returns nullopt if an intermediate product would overflow; for the
// transforms produced on the dimensions this library targets it does not.
inline std::optional<long long> bareiss_determinant(const IntMatrix& z) {
  const std::size_t n = z.n();
  if (n == 0) return 1;
  std::vector<__int128> a(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i * n + j] = z(i, j);

  int sign = 1;
  __int128 prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k * n + k] == 0) {
      std::size_t p = k + 1;
      while (p < n && a[p * n + k] == 0) ++p;
      if (p == n) return 0;
      for (std::size_t j = 0; j < n; ++j)
        std::swap(a[k * n + j], a[p * n + j]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        __int128 t1, t2, num;
        if (__builtin_mul_overflow(a[i * n + j], a[k * n + k], &t1))
          return std::nullopt;
        if (__builtin_mul_overflow(a[i * n + k], a[k * n + j], &t2))
          return std::nullopt;
        if (__builtin_sub_overflow(t1, t2, &num)) return std::nullopt;
        a[i * n + j] = num / prev;  // exact division (Bareiss)
      }
    prev = a[k * n + k];
  }
  const __int128 det = a[(n - 1) * n + (n - 1)];
  const __int128 ll_max = static_cast<__int128>(INT64_MAX);
  if (det > ll_max || det < -ll_max) return std::nullopt;
  return static_cast<long long>(sign > 0 ? det : -det);
}

inline std::vector<long long> operator*(const IntMatrix& z,
                                        const std::vector<long long>& x) {
  if (z.n() != x.size())
    throw DimensionError("integer matrix-vector product: dimensions disagree");
  std::vector<long long> y(z.n(), 0);
  for (std::size_t i = 0; i < z.n(); ++i) {
    long long s = 0;
    for (std::size_t j = 0; j < z.n(); ++j) s += z(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

}  // namespace latred
