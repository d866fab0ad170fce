#pragma once

// Fixed-size complex linear algebra: 2-vectors, 2x2 matrices and a small
// dense solver. Everything is a value type; no function keeps state.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "defect_nls/error.hpp"

namespace defect_nls {

using Complex = std::complex<double>;

inline constexpr Complex kI{0.0, 1.0};

inline bool is_finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

inline void require_finite(Complex z, const char* what) {
  if (!is_finite(z)) throw Error(ErrorKind::NonFinite, what);
}

/// Column 2-vector (a, b)^T.
struct Vec2C {
  Complex a{};
  Complex b{};

  friend constexpr bool operator==(const Vec2C&, const Vec2C&) = default;
};

/// Row 2-vector, the result of a Hermitian transpose.
struct RowVec2C {
  Complex a{};
  Complex b{};

  friend constexpr bool operator==(const RowVec2C&, const RowVec2C&) = default;
};

/// 2x2 complex matrix, row-major entries.
struct Mat2C {
  Complex m11{};
  Complex m12{};
  Complex m21{};
  Complex m22{};

  static constexpr Mat2C identity() { return {1.0, 0.0, 0.0, 1.0}; }
  static constexpr Mat2C zero() { return {}; }
  static constexpr Mat2C diag(Complex d1, Complex d2) { return {d1, 0.0, 0.0, d2}; }

  friend constexpr bool operator==(const Mat2C&, const Mat2C&) = default;
};

// ---- vector algebra -------------------------------------------------------

inline Vec2C operator+(const Vec2C& l, const Vec2C& r) { return {l.a + r.a, l.b + r.b}; }
inline Vec2C operator-(const Vec2C& l, const Vec2C& r) { return {l.a - r.a, l.b - r.b}; }
inline Vec2C operator*(Complex s, const Vec2C& v) { return {s * v.a, s * v.b}; }
inline Vec2C operator-(const Vec2C& v) { return {-v.a, -v.b}; }

inline double norm_sq(const Vec2C& v) { return std::norm(v.a) + std::norm(v.b); }
inline double norm(const Vec2C& v) { return std::sqrt(norm_sq(v)); }
inline double max_abs(const Vec2C& v) { return std::max(std::abs(v.a), std::abs(v.b)); }
inline bool is_finite(const Vec2C& v) { return is_finite(v.a) && is_finite(v.b); }

inline RowVec2C hermitian_transpose(const Vec2C& v) { return {std::conj(v.a), std::conj(v.b)}; }

inline Complex operator*(const RowVec2C& row, const Vec2C& col) { return row.a * col.a + row.b * col.b; }

/// Hermitian inner product <l, r> = l^dagger r.
inline Complex inner(const Vec2C& l, const Vec2C& r) { return hermitian_transpose(l) * r; }

/// Outer product col * row.
inline Mat2C operator*(const Vec2C& col, const RowVec2C& row) {
  return {col.a * row.a, col.a * row.b, col.b * row.a, col.b * row.b};
}

/// sigma2 * conj(v), with sigma2 = [[0, -i], [i, 0]]; orthogonal to v.
inline Vec2C orthogonal_companion(const Vec2C& v) { return {-kI * std::conj(v.b), kI * std::conj(v.a)}; }

// ---- matrix algebra -------------------------------------------------------

inline Mat2C operator+(const Mat2C& l, const Mat2C& r) {
  return {l.m11 + r.m11, l.m12 + r.m12, l.m21 + r.m21, l.m22 + r.m22};
}
inline Mat2C operator-(const Mat2C& l, const Mat2C& r) {
  return {l.m11 - r.m11, l.m12 - r.m12, l.m21 - r.m21, l.m22 - r.m22};
}
inline Mat2C operator*(Complex s, const Mat2C& m) { return {s * m.m11, s * m.m12, s * m.m21, s * m.m22}; }

inline Mat2C mat_mul(const Mat2C& l, const Mat2C& r) {
  return {l.m11 * r.m11 + l.m12 * r.m21, l.m11 * r.m12 + l.m12 * r.m22,
          l.m21 * r.m11 + l.m22 * r.m21, l.m21 * r.m12 + l.m22 * r.m22};
}
inline Mat2C operator*(const Mat2C& l, const Mat2C& r) { return mat_mul(l, r); }

inline Vec2C operator*(const Mat2C& m, const Vec2C& v) {
  return {m.m11 * v.a + m.m12 * v.b, m.m21 * v.a + m.m22 * v.b};
}

inline Complex mat_det(const Mat2C& m) { return m.m11 * m.m22 - m.m12 * m.m21; }
inline Complex trace(const Mat2C& m) { return m.m11 + m.m22; }

inline Mat2C conj(const Mat2C& m) { return {std::conj(m.m11), std::conj(m.m12), std::conj(m.m21), std::conj(m.m22)}; }
inline Mat2C adjoint(const Mat2C& m) {
  return {std::conj(m.m11), std::conj(m.m21), std::conj(m.m12), std::conj(m.m22)};
}
inline Mat2C commutator(const Mat2C& l, const Mat2C& r) { return l * r - r * l; }

inline double max_abs(const Mat2C& m) {
  return std::max({std::abs(m.m11), std::abs(m.m12), std::abs(m.m21), std::abs(m.m22)});
}
inline bool is_finite(const Mat2C& m) {
  return is_finite(m.m11) && is_finite(m.m12) && is_finite(m.m21) && is_finite(m.m22);
}

/// Singularity test |det| <= 1e-14 * max|entry|^2, scale invariant.
inline constexpr double kSingularRelTol = 1e-14;

inline bool is_singular(const Mat2C& m) {
  const double scale = max_abs(m);
  return scale == 0.0 || std::abs(mat_det(m)) <= kSingularRelTol * scale * scale;
}

/// Cofactor inverse. Throws SingularMatrix when the scaled determinant test fails.
inline Mat2C mat_inv(const Mat2C& m) {
  if (!is_finite(m)) throw Error(ErrorKind::NonFinite, "mat_inv: non-finite entry");
  if (is_singular(m)) throw Error(ErrorKind::SingularMatrix, "mat_inv: determinant below threshold");
  const Complex inv_det = 1.0 / mat_det(m);
  return {inv_det * m.m22, -inv_det * m.m12, -inv_det * m.m21, inv_det * m.m11};
}

// ---- small dense systems --------------------------------------------------

inline constexpr std::size_t kDenseCap = 64;

/// Square n x n complex matrix, n bounded by a cap (default 64).
class DenseMatC {
 public:
  explicit DenseMatC(std::size_t n, std::size_t cap = kDenseCap) : n_(n), data_(n * n) {
    if (n == 0) throw Error(ErrorKind::DimensionMismatch, "DenseMatC: n must be positive");
    if (n > cap) throw Error(ErrorKind::DimensionMismatch, "DenseMatC: n exceeds the configured cap");
  }

  std::size_t size() const noexcept { return n_; }

  Complex& operator()(std::size_t row, std::size_t col) { return data_[row * n_ + col]; }
  Complex operator()(std::size_t row, std::size_t col) const { return data_[row * n_ + col]; }

  static DenseMatC identity(std::size_t n) {
    DenseMatC m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::vector<Complex> apply(std::span<const Complex> x) const {
    if (x.size() != n_) throw Error(ErrorKind::DimensionMismatch, "DenseMatC::apply: length mismatch");
    std::vector<Complex> y(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      Complex acc{};
      for (std::size_t j = 0; j < n_; ++j) acc += (*this)(i, j) * x[j];
      y[i] = acc;
    }
    return y;
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& z : data_) m = std::max(m, std::abs(z));
    return m;
  }

 private:
  std::size_t n_;
  std::vector<Complex> data_;
};

inline double max_abs(std::span<const Complex> v) {
  double m = 0.0;
  for (const auto& z : v) m = std::max(m, std::abs(z));
  return m;
}

/// Gaussian elimination with partial pivoting. A pivot smaller than
/// 1e-14 * max|a| or a relative residual above 1e-10 is reported as SingularMatrix.
inline std::vector<Complex> solve_dense(const DenseMatC& a, std::span<const Complex> rhs) {
  const std::size_t n = a.size();
  if (rhs.size() != n) throw Error(ErrorKind::DimensionMismatch, "solve_dense: rhs length differs from n");
  const double scale = a.max_abs();
  if (!std::isfinite(scale)) throw Error(ErrorKind::NonFinite, "solve_dense: non-finite matrix entry");
  for (const auto& z : rhs) require_finite(z, "solve_dense: non-finite rhs entry");
  if (scale == 0.0) throw Error(ErrorKind::SingularMatrix, "solve_dense: zero matrix");

  DenseMatC lu = a;
  std::vector<Complex> x(rhs.begin(), rhs.end());
  const double pivot_floor = 1e-14 * scale;

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(lu(i, k)) > std::abs(lu(p, k))) p = i;
    }
    if (std::abs(lu(p, k)) <= pivot_floor) throw Error(ErrorKind::SingularMatrix, "solve_dense: pivot below threshold");
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(lu(k, j), lu(p, j));
      std::swap(x[k], x[p]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const Complex f = lu(i, k) / lu(k, k);
      if (f == Complex{}) continue;
      for (std::size_t j = k + 1; j < n; ++j) lu(i, j) -= f * lu(k, j);
      x[i] -= f * x[k];
    }
  }
  for (std::size_t k = n; k-- > 0;) {
    Complex acc = x[k];
    for (std::size_t j = k + 1; j < n; ++j) acc -= lu(k, j) * x[j];
    x[k] = acc / lu(k, k);
  }

  const auto ax = a.apply(x);
  double res = 0.0;
  for (std::size_t i = 0; i < n; ++i) res = std::max(res, std::abs(ax[i] - rhs[i]));
  const double ref = std::max(max_abs(rhs), scale * max_abs(x));
  if (!(res <= 1e-10 * ref)) throw Error(ErrorKind::SingularMatrix, "solve_dense: residual check failed");
  return x;
}

}  // namespace defect_nls
