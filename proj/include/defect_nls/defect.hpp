#pragma once

// Defect coupling between the u-side (x >= 0) and u~-side (x <= 0) at x = 0.
//
// Over zero seeds the localized defect matrix is
//   G0(lambda) = 2 lambda I + diag(alpha +/- i beta, alpha -/+ i beta),
// singular at lambda0 = -(alpha +/- i beta)/2. Two N-fold dressings whose
// seed amplitudes are paired through G0 give the dressed boundary matrix
//   G_N(lambda) = D~[N](lambda) (G0(lambda)/2) D[N](lambda)^{-1}
// which stays first order in lambda and carries the defect conditions
//   (u~ - u)_x = i alpha (u~ - u) +/- Omega (u~ + u)
//   (u~ - u)_t = -alpha (u~ - u)_x +/- i Omega (u~ + u)_x + i (u~ - u)(|u|^2 + |u~|^2)
// with Omega = sqrt(beta^2 - |u~ - u|^2).

#include <cmath>
#include <concepts>
#include <vector>

#include "defect_nls/darboux.hpp"

namespace defect_nls {

/// The +/- choice in the (1,1) entry of the defect matrix.
enum class Branch { plus, minus };

constexpr double branch_sign(Branch b) { return b == Branch::plus ? 1.0 : -1.0; }
constexpr Branch flipped(Branch b) { return b == Branch::plus ? Branch::minus : Branch::plus; }
constexpr const char* to_string(Branch b) { return b == Branch::plus ? "plus" : "minus"; }

inline constexpr double kMinBeta = 1e-9;

struct DefectParams {
  double alpha = 0.0;
  double beta = 1.0;
  Branch branch = Branch::plus;
};

inline void validate(const DefectParams& p) {
  if (!std::isfinite(p.alpha) || !std::isfinite(p.beta)) throw Error(ErrorKind::NonFinite, "defect: non-finite alpha or beta");
  if (std::abs(p.beta) < kMinBeta) throw Error(ErrorKind::InvariantViolation, "defect.beta: |beta| must be at least 1e-9");
}

/// lambda0 = -(alpha + s i beta)/2 with s the branch sign.
inline Complex lambda0(const DefectParams& p) {
  validate(p);
  return -Complex{p.alpha, branch_sign(p.branch) * p.beta} / 2.0;
}

/// Zero-seed localized defect matrix. Nonzero seed values are rejected.
inline Mat2C g0_eval(const DefectParams& p, Complex u0, Complex ut0, Complex lambda) {
  validate(p);
  if (u0 != Complex{} || ut0 != Complex{}) {
    throw Error(ErrorKind::UnsupportedSeed, "g0_eval: only zero seed potentials are supported");
  }
  const Complex shift{0.0, branch_sign(p.branch) * p.beta};
  return Mat2C::diag(2.0 * lambda + p.alpha + shift, 2.0 * lambda + p.alpha - shift);
}

/// B_inf(lambda) = (2 lambda + alpha) I +/- i beta sigma3, the |x| -> infinity limit of the defect matrix.
inline Mat2C b_infinity(const DefectParams& p, Complex lambda) {
  validate(p);
  return (2.0 * lambda + p.alpha) * Mat2C::identity() + Complex{0.0, branch_sign(p.branch) * p.beta} * kSigma3;
}

/// Separation from lambda0 and its conjugate below which an eigenvalue is refused.
inline constexpr double kForbiddenRadius = 1e-8;

inline void require_not_forbidden(const DefectParams& p, Complex lambda, const char* where) {
  const Complex l0 = lambda0(p);
  if (std::abs(lambda - l0) < kForbiddenRadius || std::abs(lambda - std::conj(l0)) < kForbiddenRadius) {
    throw Error(ErrorKind::ForbiddenEigenvalue, std::string(where) + ": eigenvalue coincides with lambda0 or its conjugate");
  }
}

/// u~-side amplitudes (G0(lambda_j) init)/2, which realize
/// u~_j/v~_j = (2 lambda_j + alpha +/- i beta)/(2 lambda_j + alpha -/+ i beta) u_j/v_j.
inline SpectralPoint pair_init_vectors(const DefectParams& p, const SpectralPoint& sp) {
  require_not_forbidden(p, sp.lambda, "pair_init_vectors");
  return {sp.lambda, 0.5 * (g0_eval(p, 0.0, 0.0, sp.lambda) * sp.init)};
}

/// Negative control: reuse the u-side amplitudes on the u~-side.
enum class Pairing { matched, mismatched };

namespace detail {

inline Vec2C null_vector(const Mat2C& m) {
  const Vec2C from_row1{-m.m12, m.m11};
  const Vec2C from_row2{m.m22, -m.m21};
  return norm_sq(from_row1) >= norm_sq(from_row2) ? from_row1 : from_row2;
}

}  // namespace detail

/// The u-side and u~-side dressings coupled through the defect at x = 0.
struct PairedSystem {
  DefectParams defect;
  DressingChain right;
  DressingChain left;
  Complex lambda0{};
  SpectralPoint psi0;

  Complex right_field(double t, double x) const { return dressed_field(right, t, x); }
  Complex left_field(double t, double x) const { return dressed_field(left, t, x); }

  /// G_N(t, 0, lambda) as the direct product; SingularDressing where D[N] is singular.
  Mat2C boundary_matrix(double t, Complex lambda) const {
    const auto rs = build_chain_state(right, t, 0.0);
    const auto ls = build_chain_state(left, t, 0.0);
    const Mat2C d = eval_DN(rs, right, lambda);
    if (is_singular(d)) throw Error(ErrorKind::SingularDressing, "gn_eval: D[N] is singular at this lambda");
    const Mat2C g0_half = 0.5 * g0_eval(defect, 0.0, 0.0, lambda);
    return eval_DN(ls, left, lambda) * g0_half * mat_inv(d);
  }

  /// omega0 = D[N](t, 0, lambda0) upsilon0, with upsilon0 spanning ker G0(lambda0).
  Vec2C boundary_kernel_vector(double t) const {
    const Vec2C upsilon0 = detail::null_vector(g0_eval(defect, 0.0, 0.0, lambda0));
    return eval_DN(build_chain_state(right, t, 0.0), right, lambda0) * upsilon0;
  }
};

inline PairedSystem build_paired_system(const DefectParams& p, const std::vector<SpectralPoint>& points,
                                        const Vec2C& psi0_init = {1.0, 0.0}, Pairing pairing = Pairing::matched) {
  validate(p);
  if (norm_sq(psi0_init) == 0.0) throw Error(ErrorKind::ZeroVector, "build_paired_system: psi0_init is zero");
  std::vector<SpectralPoint> left_points;
  left_points.reserve(points.size());
  for (const auto& sp : points) {
    if (std::abs(sp.lambda.imag()) < kMinImag) throw Error(ErrorKind::RealEigenvalue, "build_paired_system: real eigenvalue");
    left_points.push_back(pairing == Pairing::matched ? pair_init_vectors(p, sp) : SpectralPoint{sp.lambda, sp.init});
    require_not_forbidden(p, sp.lambda, "build_paired_system");
  }
  const Complex l0 = lambda0(p);
  return {p, DressingChain(points, Side::right), DressingChain(std::move(left_points), Side::left), l0, {l0, psi0_init}};
}

/// Defect-side view shared by PairedSystem and DestructiveSystem.
template <class S>
concept TwoSidedSystem = requires(const S& s, double t, double x, Complex lambda) {
  { s.defect } -> std::convertible_to<DefectParams>;
  { s.right_field(t, x) } -> std::convertible_to<Complex>;
  { s.left_field(t, x) } -> std::convertible_to<Complex>;
  { s.boundary_matrix(t, lambda) } -> std::convertible_to<Mat2C>;
  { s.boundary_kernel_vector(t) } -> std::convertible_to<Vec2C>;
};

inline Mat2C gn_eval(const PairedSystem& sys, double t, Complex lambda) { return sys.boundary_matrix(t, lambda); }

/// Tolerated rounding below zero in beta^2 - |u~ - u|^2.
inline constexpr double kOmegaSlack = 1e-10;

/// Omega = sqrt(beta^2 - |u~ - u|^2); small negative radicands are clipped to zero.
inline double omega(const DefectParams& p, Complex u, Complex ut) {
  const double radicand = p.beta * p.beta - std::norm(ut - u);
  if (radicand < -kOmegaSlack) throw Error(ErrorKind::ComplexOmega, "omega: beta^2 - |u~ - u|^2 is negative");
  return std::sqrt(std::max(radicand, 0.0));
}

/// G(lambda) = lambda I + constant, extracted from probes at lambda = 0 and 1
/// and checked at lambda = -1.5. Real probes never hit a dressing eigenvalue.
struct GnPolynomial {
  Mat2C constant;
};

inline constexpr double kDegreeOneTol = 1e-9;

template <TwoSidedSystem S>
GnPolynomial boundary_polynomial(const S& sys, double t) {
  const Mat2C at0 = sys.boundary_matrix(t, 0.0);
  const Mat2C at1 = sys.boundary_matrix(t, 1.0);
  const Mat2C at_check = sys.boundary_matrix(t, -1.5);
  const double scale = std::max(1.0, max_abs(at0));
  if (max_abs(at1 - at0 - Mat2C::identity()) > kDegreeOneTol * scale ||
      max_abs(at_check - (at0 + Complex{-1.5} * Mat2C::identity())) > kDegreeOneTol * scale) {
    throw Error(ErrorKind::NotDegreeOne, "boundary matrix is not lambda I + const at this t");
  }
  return {at0};
}

inline GnPolynomial gn_polynomial(const PairedSystem& sys, double t) { return boundary_polynomial(sys, t); }

/// Defect-form parameters read back from G = lambda I + G0 through trace and determinant.
struct DefectFormReadout {
  double alpha_hat = 0.0;
  double beta_sq_hat = 0.0;
  Branch branch_hat = Branch::plus;
  /// Imaginary part of 2 G0_11 - alpha_hat, i.e. the signed root; its sign is branch_hat.
  double signed_omega = 0.0;
  /// u~ - u at x = 0, from G0_12 = -i (u~ - u)/2.
  Complex offdiag_jump{};
};

inline DefectFormReadout readout_from_constant(const Mat2C& c) {
  DefectFormReadout r;
  r.alpha_hat = trace(c).real();
  const double beta_sq = 4.0 * mat_det(c).real() - r.alpha_hat * r.alpha_hat;
  if (beta_sq < -kOmegaSlack) throw Error(ErrorKind::ComplexOmega, "readout: negative beta^2");
  r.beta_sq_hat = std::max(beta_sq, 0.0);
  r.signed_omega = (2.0 * c.m11 - r.alpha_hat).imag();
  r.branch_hat = r.signed_omega >= 0.0 ? Branch::plus : Branch::minus;
  r.offdiag_jump = 2.0 * kI * c.m12;
  return r;
}

template <TwoSidedSystem S>
DefectFormReadout boundary_form_readout(const S& sys, double t) {
  return readout_from_constant(boundary_polynomial(sys, t).constant);
}

inline DefectFormReadout gn_form_readout(const PairedSystem& sys, double t) { return boundary_form_readout(sys, t); }

template <TwoSidedSystem S>
Branch realized_branch(const S& sys, double t) {
  return boundary_form_readout(sys, t).branch_hat;
}

// ---- defect conditions ----------------------------------------------------

struct DefectResidual {
  double r1 = 0.0;
  double r2 = 0.0;

  double max() const { return std::max(r1, r2); }
};

inline DerivativeOptions default_residual_derivatives() { return {1e-3, true}; }

/// Both defect conditions at x = 0 with an explicit sign in front of Omega.
template <TwoSidedSystem S>
DefectResidual defect_residual_with_sign(const S& sys, double t, double sign,
                                         const DerivativeOptions& opts = default_residual_derivatives()) {
  auto jump = [&](double tt, double xx) { return sys.left_field(tt, xx) - sys.right_field(tt, xx); };
  auto sum = [&](double tt, double xx) { return sys.left_field(tt, xx) + sys.right_field(tt, xx); };
  const Complex u = sys.right_field(t, 0.0);
  const Complex ut = sys.left_field(t, 0.0);
  const double om = omega(sys.defect, u, ut);
  const double alpha = sys.defect.alpha;
  const auto dj = numeric_derivatives(jump, t, 0.0, opts);
  const auto ds = numeric_derivatives(sum, t, 0.0, opts);
  const Complex diff = ut - u;
  DefectResidual r;
  r.r1 = std::abs(dj.u_x - kI * alpha * diff - sign * om * (ut + u));
  r.r2 = std::abs(dj.u_t + alpha * dj.u_x - sign * kI * om * ds.u_x - kI * diff * (std::norm(u) + std::norm(ut)));
  return r;
}

/// Defect conditions with the sign declared in the defect parameters.
template <TwoSidedSystem S>
DefectResidual defect_residual(const S& sys, double t, const DerivativeOptions& opts = default_residual_derivatives()) {
  return defect_residual_with_sign(sys, t, branch_sign(sys.defect.branch), opts);
}

/// Defect conditions with the sign that the boundary matrix realizes at t.
template <TwoSidedSystem S>
DefectResidual defect_residual_realized(const S& sys, double t,
                                        const DerivativeOptions& opts = default_residual_derivatives()) {
  return defect_residual_with_sign(sys, t, branch_sign(realized_branch(sys, t)), opts);
}

// ---- invariants of the boundary matrix -----------------------------------

/// max-entry norm of D~[N] (G0/2) - G_N D[N] at (t, x = 0, lambda).
inline double permutability_residual(const PairedSystem& sys, double t, Complex lambda) {
  const auto rs = build_chain_state(sys.right, t, 0.0);
  const auto ls = build_chain_state(sys.left, t, 0.0);
  const Mat2C lhs = eval_DN(ls, sys.left, lambda) * (0.5 * g0_eval(sys.defect, 0.0, 0.0, lambda));
  const Mat2C rhs = gn_eval(sys, t, lambda) * eval_DN(rs, sys.right, lambda);
  return max_abs(lhs - rhs);
}

/// |det G(lambda) - (lambda^2 + alpha lambda + (alpha^2 + beta^2)/4)|.
template <TwoSidedSystem S>
double det_invariance_residual(const S& sys, double t, Complex lambda) {
  const auto& p = sys.defect;
  const Complex expected = lambda * lambda + p.alpha * lambda + (p.alpha * p.alpha + p.beta * p.beta) / 4.0;
  return std::abs(mat_det(sys.boundary_matrix(t, lambda)) - expected);
}

/// |G(lambda0) omega0| / |omega0|.
template <TwoSidedSystem S>
double kernel_transport_residual(const S& sys, double t) {
  const Vec2C w = sys.boundary_kernel_vector(t);
  const double n = norm(w);
  if (!(n > 0.0)) throw Error(ErrorKind::DegenerateDressing, "kernel vector vanished");
  return norm(sys.boundary_matrix(t, lambda0(sys.defect)) * w) / n;
}

/// max-entry norm of dG/dt - V~[N] G + G V[N] at x = 0, with V built from
/// the reconstructed fields and their x-derivatives.
template <TwoSidedSystem S>
double boundary_constraint_residual(const S& sys, double t, Complex lambda,
                                    const DerivativeOptions& opts = default_residual_derivatives()) {
  auto g_at = [&](double tt) { return sys.boundary_matrix(tt, lambda); };
  auto fd = [&](double h) {
    return (1.0 / (12.0 * h)) * (Complex{-1.0} * g_at(t + 2 * h) + Complex{8.0} * g_at(t + h) -
                                 Complex{8.0} * g_at(t - h) + g_at(t - 2 * h));
  };
  Mat2C dg = fd(opts.h);
  if (opts.richardson) dg = (1.0 / 15.0) * (Complex{16.0} * fd(opts.h / 2.0) - dg);

  auto right = [&](double tt, double xx) { return sys.right_field(tt, xx); };
  auto left = [&](double tt, double xx) { return sys.left_field(tt, xx); };
  const PotentialSample pr{sys.right_field(t, 0.0), numeric_derivatives(right, t, 0.0, opts).u_x};
  const PotentialSample pl{sys.left_field(t, 0.0), numeric_derivatives(left, t, 0.0, opts).u_x};
  const Mat2C g = g_at(t);
  return max_abs(dg - lax_V(lambda, pl) * g + g * lax_V(lambda, pr));
}

// ---- destructive (boundary-bound) solution --------------------------------

/// u = 0 on x >= 0 and a single dressing at lambda0 on x <= 0; the boundary
/// matrix is the one-fold dressing matrix G1 = D~[1] itself.
struct DestructiveSystem {
  DefectParams defect;
  DressingChain left;
  Complex lambda0{};

  Complex right_field(double, double) const { return 0.0; }
  Complex left_field(double t, double x) const { return dressed_field(left, t, x); }

  Mat2C boundary_matrix(double t, Complex lambda) const {
    return eval_DN(build_chain_state(left, t, 0.0), left, lambda);
  }

  Vec2C boundary_kernel_vector(double t) const { return scaled_seed_vector(left.points().front(), t, 0.0); }

  /// Soliton velocity 2 alpha and peak amplitude |beta|.
  double velocity() const { return 2.0 * defect.alpha; }
  double amplitude() const { return std::abs(defect.beta); }
};

inline DestructiveSystem destructive_solution(const DefectParams& p, const Vec2C& center_init) {
  validate(p);
  if (norm_sq(center_init) == 0.0) throw Error(ErrorKind::ZeroVector, "destructive_solution: center_init is zero");
  const Complex l0 = lambda0(p);
  return {p, DressingChain({{l0, center_init}}, Side::left), l0};
}

static_assert(TwoSidedSystem<PairedSystem>);
static_assert(TwoSidedSystem<DestructiveSystem>);

}  // namespace defect_nls
