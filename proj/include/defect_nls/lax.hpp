#pragma once

// Lax pair of the focusing NLS equation i u_t + u_xx + 2|u|^2 u = 0:
//   psi_x = U psi,  U = -i lambda sigma3 + Q
//   psi_t = V psi,  V = -2i lambda^2 sigma3 + Qtilde
// and the explicit vector solutions over the zero potential.

#include <cmath>

#include "defect_nls/numerics.hpp"

namespace defect_nls {

inline constexpr Mat2C kSigma3{1.0, 0.0, 0.0, -1.0};
inline constexpr Mat2C kSigma{0.0, 1.0, -1.0, 0.0};
inline constexpr Mat2C kSigma2{0.0, Complex{0.0, -1.0}, Complex{0.0, 1.0}, 0.0};

/// theta(t, x, lambda) = lambda x + 2 lambda^2 t.
inline Complex theta(double t, double x, Complex lambda) { return lambda * x + 2.0 * lambda * lambda * t; }

/// Field value and its spatial derivative at one point.
struct PotentialSample {
  Complex u{};
  Complex u_x{};
};

inline Mat2C q_matrix(const PotentialSample& p) { return {0.0, p.u, -std::conj(p.u), 0.0}; }

inline Mat2C qtilde_matrix(const PotentialSample& p, Complex lambda) {
  const double mod_sq = std::norm(p.u);
  return {kI * mod_sq, 2.0 * lambda * p.u + kI * p.u_x, -2.0 * lambda * std::conj(p.u) + kI * std::conj(p.u_x),
          -kI * mod_sq};
}

inline Mat2C lax_U(Complex lambda, const PotentialSample& p) { return (-kI * lambda) * kSigma3 + q_matrix(p); }

inline Mat2C lax_V(Complex lambda, const PotentialSample& p) {
  return (-2.0 * kI * lambda * lambda) * kSigma3 + qtilde_matrix(p, lambda);
}

/// A non-real eigenvalue together with the constant amplitudes (u_j, v_j)
/// of its zero-potential Lax solution.
struct SpectralPoint {
  Complex lambda{};
  Vec2C init{};
};

/// Seed potential the dressing starts from. Only the zero seed is implemented.
enum class Seed { zero };

/// Exponents beyond this magnitude are reported as OverflowRange.
inline constexpr double kMaxExponent = 700.0;

/// psi = exp((-i lambda x - 2 i lambda^2 t) sigma3) (u_j, v_j)^T, a solution of
/// the Lax system with u = 0.
inline Vec2C seed_vector(const SpectralPoint& sp, double t, double x, Seed seed = Seed::zero) {
  if (seed != Seed::zero) throw Error(ErrorKind::UnsupportedSeed, "seed_vector: only the zero seed is implemented");
  const Complex th = theta(t, x, sp.lambda);
  if (!is_finite(th)) throw Error(ErrorKind::NonFinite, "seed_vector: non-finite phase");
  if (std::abs(th.imag()) > kMaxExponent) throw Error(ErrorKind::OverflowRange, "seed_vector: |Im theta| exceeds 700");
  return {sp.init.a * std::exp(-kI * th), sp.init.b * std::exp(kI * th)};
}

/// Same direction as seed_vector, rescaled by exp(-|Im theta|) so that no
/// component overflows. Projectors only see the direction.
inline Vec2C scaled_seed_vector(const SpectralPoint& sp, double t, double x) {
  const Complex th = theta(t, x, sp.lambda);
  if (!is_finite(th)) throw Error(ErrorKind::NonFinite, "scaled_seed_vector: non-finite phase");
  const double im = th.imag();
  const double shift = std::abs(im);
  const Complex carrier = std::exp(Complex{0.0, -th.real()});
  return {sp.init.a * carrier * std::exp(im - shift), sp.init.b * std::conj(carrier) * std::exp(-im - shift)};
}

}  // namespace defect_nls
