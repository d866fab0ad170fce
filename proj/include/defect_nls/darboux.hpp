#pragma once

// N-fold Darboux dressing of the zero potential.
//
// A chain of spectral points (lambda_j, init_j) defines rank-one projectors
// P[j] built from the partially dressed vectors psi_j[j-1] = D[j-1](lambda_j) psi_j,
// the dressing matrix D[N] = prod_j ((lambda - conj(lambda_j)) I + (conj(lambda_j) - lambda_j) P[j])
// and the dressed potential Q[N] = Q[0] - i sum_j (lambda_j - conj(lambda_j)) [sigma3, P[j]].

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "defect_nls/lax.hpp"

namespace defect_nls {

/// Rank-one Hermitian projector v v^dagger / (v^dagger v).
inline Mat2C projector(const Vec2C& v) {
  const double n2 = norm_sq(v);
  if (!(n2 > 0.0)) throw Error(ErrorKind::ZeroVector, "projector: zero vector");
  if (!std::isfinite(n2)) throw Error(ErrorKind::NonFinite, "projector: non-finite vector");
  return (1.0 / n2) * (v * hermitian_transpose(v));
}

/// Single fold built from a precomputed projector.
inline Mat2C fold_matrix(Complex lambda_j, const Mat2C& proj, Complex lambda) {
  const Complex lj_conj = std::conj(lambda_j);
  return (lambda - lj_conj) * Mat2C::identity() + (lj_conj - lambda_j) * proj;
}

/// Minimum |Im lambda| for an admissible dressing eigenvalue.
inline constexpr double kMinImag = 1e-6;
/// Minimum pairwise distance between eigenvalues of one chain.
inline constexpr double kMinSeparation = 1e-8;

/// D[1](lambda) = (lambda - conj(l1)) I + (conj(l1) - l1) P[1].
inline Mat2C one_fold(Complex lambda1, const Vec2C& v, Complex lambda) {
  if (std::abs(lambda1.imag()) < kMinImag) throw Error(ErrorKind::RealEigenvalue, "one_fold: eigenvalue on the real axis");
  return fold_matrix(lambda1, projector(v), lambda);
}

/// Which half-line a chain dresses: right is u on x >= 0, left is u~ on x <= 0.
enum class Side { right, left };

class DressingChain {
 public:
  DressingChain() = default;

  DressingChain(std::vector<SpectralPoint> points, Side side) : points_(std::move(points)), side_(side) {
    for (std::size_t j = 0; j < points_.size(); ++j) {
      const auto& p = points_[j];
      if (!is_finite(p.lambda) || !is_finite(p.init)) throw Error(ErrorKind::NonFinite, "DressingChain: non-finite point");
      if (std::abs(p.lambda.imag()) < kMinImag) {
        throw Error(ErrorKind::RealEigenvalue, "DressingChain: |Im lambda| below 1e-6 at index " + std::to_string(j));
      }
      if (norm_sq(p.init) == 0.0) throw Error(ErrorKind::ZeroVector, "DressingChain: zero init at index " + std::to_string(j));
      for (std::size_t k = 0; k < j; ++k) {
        if (std::abs(points_[k].lambda - p.lambda) < kMinSeparation) {
          throw Error(ErrorKind::DuplicateEigenvalue,
                      "DressingChain: eigenvalues " + std::to_string(k) + " and " + std::to_string(j) + " coincide");
        }
      }
    }
  }

  const std::vector<SpectralPoint>& points() const noexcept { return points_; }
  Side side() const noexcept { return side_; }
  std::size_t size() const noexcept { return points_.size(); }
  bool empty() const noexcept { return points_.empty(); }

 private:
  std::vector<SpectralPoint> points_;
  Side side_ = Side::right;
};

/// Projectors and partially dressed vectors of a chain at one (t, x).
struct ChainState {
  double t = 0.0;
  double x = 0.0;
  std::vector<Vec2C> dressed_vectors;
  std::vector<Mat2C> projectors;
};

/// Builds psi_j[j-1] and P[j] for every point. Seeds are rescaled to stay in
/// floating-point range, so dressed vectors are defined up to a positive factor
/// (exact at t = x = 0).
inline ChainState build_chain_state(const DressingChain& chain, double t, double x) {
  ChainState state{t, x, {}, {}};
  const auto& pts = chain.points();
  state.dressed_vectors.reserve(pts.size());
  state.projectors.reserve(pts.size());
  for (std::size_t j = 0; j < pts.size(); ++j) {
    Vec2C v = scaled_seed_vector(pts[j], t, x);
    for (std::size_t k = 0; k < j; ++k) {
      v = fold_matrix(pts[k].lambda, state.projectors[k], pts[j].lambda) * v;
      const double m = max_abs(v);
      if (m > 0.0 && (m > 1e100 || m < 1e-100)) v = (1.0 / m) * v;
    }
    if (!(norm(v) >= 1e-300)) {
      throw Error(ErrorKind::DegenerateDressing, "build_chain_state: dressed vector vanished at index " + std::to_string(j));
    }
    state.dressed_vectors.push_back(v);
    state.projectors.push_back(projector(v));
  }
  return state;
}

/// Ordered product D[N](lambda) = F_N ... F_1.
inline Mat2C eval_DN(const ChainState& state, const DressingChain& chain, Complex lambda) {
  Mat2C d = Mat2C::identity();
  const auto& pts = chain.points();
  for (std::size_t j = 0; j < state.projectors.size(); ++j) {
    d = fold_matrix(pts[j].lambda, state.projectors[j], lambda) * d;
  }
  return d;
}

/// Entry (1,2) of Q[N] over the scalar seed potential.
inline Complex reconstruct_u(const ChainState& state, const DressingChain& chain, Complex seed_u = 0.0) {
  Mat2C q = q_matrix({seed_u, 0.0});
  const auto& pts = chain.points();
  for (std::size_t j = 0; j < state.projectors.size(); ++j) {
    const Complex gap = pts[j].lambda - std::conj(pts[j].lambda);
    q = q - (kI * gap) * commutator(kSigma3, state.projectors[j]);
  }
  const double scale = std::max(1.0, std::abs(q.m12));
  if (std::abs(q.m21 + std::conj(q.m12)) > 1e-12 * scale) {
    throw Error(ErrorKind::InvariantViolation, "reconstruct_u: Q[N] lost its anti-Hermitian structure");
  }
  return q.m12;
}

/// Dressed field u[N](t, x) of a chain over the zero seed.
inline Complex dressed_field(const DressingChain& chain, double t, double x) {
  if (chain.empty()) return 0.0;
  return reconstruct_u(build_chain_state(chain, t, x), chain);
}

// ---- closed-form one-soliton ----------------------------------------------

struct OneSolitonParams {
  double xi = 0.0;
  double eta = 1.0;
  double x1 = 0.0;
  double phi1 = 0.0;
};

/// u = 2 eta exp(-i(2 xi x + 4(xi^2 - eta^2) t + phi1 + pi/2)) sech(2 eta (x + 4 xi t - x1)).
inline Complex one_soliton_closed(const OneSolitonParams& p, double t, double x) {
  if (!(p.eta > 0.0)) throw Error(ErrorKind::InvalidParameter, "one_soliton_closed: eta must be positive");
  const double phase = 2.0 * p.xi * x + 4.0 * (p.xi * p.xi - p.eta * p.eta) * t + p.phi1 + std::numbers::pi / 2.0;
  const double arg = 2.0 * p.eta * (x + 4.0 * p.xi * t - p.x1);
  return 2.0 * p.eta * std::exp(Complex{0.0, -phase}) / std::cosh(arg);
}

// ---- finite differences ---------------------------------------------------

struct DerivativeOptions {
  double h = 1e-3;
  /// Combine steps h and h/2 into a sixth-order estimate.
  bool richardson = false;
};

struct FieldDerivatives {
  Complex u_t{};
  Complex u_x{};
  Complex u_xx{};
};

namespace detail {

template <class Field>
FieldDerivatives central_differences(const Field& field, double t, double x, double h) {
  const Complex c = field(t, x);
  const Complex xp1 = field(t, x + h), xm1 = field(t, x - h);
  const Complex xp2 = field(t, x + 2 * h), xm2 = field(t, x - 2 * h);
  const Complex tp1 = field(t + h, x), tm1 = field(t - h, x);
  const Complex tp2 = field(t + 2 * h, x), tm2 = field(t - 2 * h, x);
  FieldDerivatives d;
  d.u_x = (-xp2 + 8.0 * xp1 - 8.0 * xm1 + xm2) / (12.0 * h);
  d.u_t = (-tp2 + 8.0 * tp1 - 8.0 * tm1 + tm2) / (12.0 * h);
  d.u_xx = (-xp2 + 16.0 * xp1 - 30.0 * c + 16.0 * xm1 - xm2) / (12.0 * h * h);
  return d;
}

}  // namespace detail

/// Fourth-order central differences of a field (t, x) -> Complex.
template <class Field>
FieldDerivatives numeric_derivatives(const Field& field, double t, double x, const DerivativeOptions& opts = {}) {
  if (!(opts.h > 0.0)) throw Error(ErrorKind::InvalidParameter, "numeric_derivatives: step must be positive");
  const auto coarse = detail::central_differences(field, t, x, opts.h);
  if (!opts.richardson) return coarse;
  const auto fine = detail::central_differences(field, t, x, opts.h / 2.0);
  auto extrapolate = [](Complex f, Complex c) { return (16.0 * f - c) / 15.0; };
  return {extrapolate(fine.u_t, coarse.u_t), extrapolate(fine.u_x, coarse.u_x), extrapolate(fine.u_xx, coarse.u_xx)};
}

/// |i u_t + u_xx + 2|u|^2 u| at (t, x).
template <class Field>
double nls_residual(const Field& field, double t, double x, const DerivativeOptions& opts = {}) {
  const auto d = numeric_derivatives(field, t, x, opts);
  const Complex u = field(t, x);
  return std::abs(kI * d.u_t + d.u_xx + 2.0 * std::norm(u) * u);
}

}  // namespace defect_nls
