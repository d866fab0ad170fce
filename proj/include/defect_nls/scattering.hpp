#pragma once

// Reflectionless inverse scattering for focusing NLS and its bridge to the
// dressing construction.
//
// Discrete data (lambda_j, C_j) with C_j = 2 eta_j exp(2 eta_j x_j + i phi_j)
// determine u through a 2N x 2N linear system. The same data read off a
// zero-seed dressing chain, and a defect multiplies each C_j by
//   q_j = (2 lambda_j + alpha -/+ i beta) / (2 lambda_j + alpha +/- i beta).

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include "defect_nls/defect.hpp"

namespace defect_nls {

struct ScatteringDatum {
  Complex lambda{};
  /// Norming constant.
  Complex C{};

  double eta() const { return lambda.imag(); }
  double xi() const { return lambda.real(); }
  /// Center x_j from |C_j| = 2 eta_j exp(2 eta_j x_j).
  double x() const { return std::log(std::abs(C) / (2.0 * eta())) / (2.0 * eta()); }
  /// Phase phi_j = arg C_j.
  double phi() const { return std::arg(C); }

  static ScatteringDatum from_position(Complex lambda, double x, double phi) {
    const double eta = lambda.imag();
    return {lambda, 2.0 * eta * std::exp(Complex{2.0 * eta * x, phi})};
  }
};

/// Spatial and phase shift x~_j - x_j, phi~_j - phi_j.
struct ShiftPrediction {
  double dx = 0.0;
  double dphi = 0.0;
};

/// Principal value in (-pi, pi].
inline double wrap_phase(double phi) {
  double w = std::remainder(phi, 2.0 * std::numbers::pi);
  if (w <= -std::numbers::pi) w += 2.0 * std::numbers::pi;
  return w;
}

/// A point below the real axis is moved to conj(lambda) with amplitudes
/// sigma2 conj(init); the projector, and so the dressed field, is unchanged.
inline SpectralPoint canonical_point(const SpectralPoint& sp) {
  if (sp.lambda.imag() >= 0.0) return sp;
  return {std::conj(sp.lambda), orthogonal_companion(sp.init)};
}

// ---- reflectionless solver -------------------------------------------------

inline void validate_scattering_data(const std::vector<ScatteringDatum>& data) {
  for (std::size_t j = 0; j < data.size(); ++j) {
    const auto& d = data[j];
    if (!is_finite(d.lambda) || !is_finite(d.C)) throw Error(ErrorKind::NonFinite, "scattering datum is not finite");
    if (!(d.lambda.imag() > 0.0)) throw Error(ErrorKind::InvalidParameter, "scattering datum lambda must lie in the upper half plane");
    if (d.C == Complex{}) throw Error(ErrorKind::InvalidParameter, "scattering datum has a zero norming constant");
    for (std::size_t k = 0; k < j; ++k) {
      if (std::abs(data[k].lambda - d.lambda) < kMinSeparation) {
        throw Error(ErrorKind::SingularMatrix, "solve_reflectionless: coincident eigenvalues");
      }
    }
  }
}

/// u(t, x) of the reflectionless potential with the given discrete data.
///
/// Unknowns are the first components X_l of the first column at conj(lambda_l)
/// and Y_j of the second column at lambda_j:
///   X_l - sum_j c_j Y_j / (conj(lambda_l) - lambda_j) = 1
///   Y_j - sum_m cbar_m X_m / (lambda_j - conj(lambda_m)) = 0
/// with c_j = C_j e^{2i theta_j}, cbar_j = -conj(C_j) e^{-2i conj(theta_j)},
/// and u = 2i sum_j cbar_j X_j.
inline Complex solve_reflectionless(const std::vector<ScatteringDatum>& data, double t, double x) {
  validate_scattering_data(data);
  const std::size_t n = data.size();
  if (n == 0) return 0.0;

  std::vector<Complex> c(n), cbar(n);
  for (std::size_t j = 0; j < n; ++j) {
    const Complex th = theta(t, x, data[j].lambda);
    if (std::abs(2.0 * th.imag()) > kMaxExponent) throw Error(ErrorKind::OverflowRange, "solve_reflectionless: exponent out of range");
    c[j] = data[j].C * std::exp(2.0 * kI * th);
    cbar[j] = -std::conj(data[j].C) * std::exp(-2.0 * kI * std::conj(th));
  }

  DenseMatC a = DenseMatC::identity(2 * n);
  std::vector<Complex> rhs(2 * n, 0.0);
  for (std::size_t l = 0; l < n; ++l) {
    rhs[l] = 1.0;
    for (std::size_t j = 0; j < n; ++j) {
      a(l, n + j) -= c[j] / (std::conj(data[l].lambda) - data[j].lambda);
      a(n + l, j) -= cbar[j] / (data[l].lambda - std::conj(data[j].lambda));
    }
  }
  const auto sol = solve_dense(a, rhs);
  Complex u{};
  for (std::size_t j = 0; j < n; ++j) u += cbar[j] * sol[j];
  return 2.0 * kI * u;
}

// ---- dressing chain -> scattering data -----------------------------------

/// Which amplitude ratio enters C_j^[j] = (lambda_j - conj(lambda_j)) / (-r_j a11^[j-1](lambda_j)).
enum class NormingConvention {
  /// r_j = u_j / v_j; agrees with the dressing reconstruction.
  amplitude_ratio,
  /// r_j = conj(v_j / u_j); kept for comparison, does not reproduce the dressed field.
  conjugate_ratio,
};

inline constexpr NormingConvention kNormingConvention = NormingConvention::amplitude_ratio;

/// Norming constants of a zero-seed chain, built by the iterated recursions
///   a11 <- a11 (lambda - lambda_j) / (lambda - conj(lambda_j))
///   C_k <- C_k (lambda_k - conj(lambda_j)) / (lambda_k - lambda_j)   for k < j.
inline std::vector<ScatteringDatum> init_to_norming(const DressingChain& chain,
                                                    NormingConvention convention = kNormingConvention) {
  std::vector<SpectralPoint> pts;
  pts.reserve(chain.size());
  for (const auto& sp : chain.points()) {
    const auto cp = canonical_point(sp);
    if (cp.init.a == Complex{} || cp.init.b == Complex{}) {
      throw Error(ErrorKind::ZeroComponent, "init_to_norming: an init component is zero");
    }
    pts.push_back(cp);
  }

  std::vector<ScatteringDatum> out;
  out.reserve(pts.size());
  for (std::size_t j = 0; j < pts.size(); ++j) {
    const Complex lj = pts[j].lambda;
    for (std::size_t k = 0; k < j; ++k) {
      out[k].C *= (out[k].lambda - std::conj(lj)) / (out[k].lambda - lj);
    }
    Complex a11 = 1.0;
    for (std::size_t k = 0; k < j; ++k) a11 *= (lj - pts[k].lambda) / (lj - std::conj(pts[k].lambda));
    const Complex r = convention == NormingConvention::amplitude_ratio ? pts[j].init.a / pts[j].init.b
                                                                       : std::conj(pts[j].init.b / pts[j].init.a);
    out.push_back({lj, (lj - std::conj(lj)) / (-r * a11)});
  }
  return out;
}

/// (xi, eta, x1, phi1) of the single soliton with datum d.
inline OneSolitonParams one_soliton_params(const ScatteringDatum& d) {
  if (!(d.eta() > 0.0)) throw Error(ErrorKind::InvalidParameter, "one_soliton_params: eta must be positive");
  return {d.xi(), d.eta(), d.x(), d.phi()};
}

// ---- transmission through the defect -------------------------------------

/// q = (2 lambda + alpha - s i beta) / (2 lambda + alpha + s i beta), s the branch sign.
inline Complex transmission_quotient(const DefectParams& p, Complex lambda) {
  validate(p);
  if (!(lambda.imag() > 0.0)) throw Error(ErrorKind::InvalidParameter, "transmission: lambda must lie in the upper half plane");
  require_not_forbidden(p, lambda, "transmission");
  const Complex shift{0.0, branch_sign(p.branch) * p.beta};
  return (2.0 * lambda + p.alpha - shift) / (2.0 * lambda + p.alpha + shift);
}

inline ShiftPrediction predict_transmission(const DefectParams& p, Complex lambda) {
  const Complex q = transmission_quotient(p, lambda);
  return {std::log(std::abs(q)) / (2.0 * lambda.imag()), wrap_phase(std::arg(q))};
}

/// C~_j = C_j q_j, lambda unchanged.
inline ScatteringDatum relate_norming(const DefectParams& p, const ScatteringDatum& d) {
  return {d.lambda, d.C * transmission_quotient(p, d.lambda)};
}

// ---- empirical shift ---------------------------------------------------------

struct ShiftMeasureOptions {
  /// Far time; defaults to 15 / (smallest velocity gap).
  std::optional<double> t_far;
  double grid_step = 0.01;
};

namespace detail {

struct PeakFit {
  double center = 0.0;
  double height = 0.0;
};

template <class Field>
PeakFit locate_peak(const Field& field, double lo, double hi, double step, double min_height) {
  const auto n = static_cast<std::size_t>(std::ceil((hi - lo) / step)) + 1;
  std::vector<double> mag(n);
  for (std::size_t i = 0; i < n; ++i) mag[i] = std::abs(field(lo + step * static_cast<double>(i)));
  const auto best = static_cast<std::size_t>(std::max_element(mag.begin(), mag.end()) - mag.begin());
  if (best == 0 || best + 1 == n || !(mag[best] > min_height)) {
    throw Error(ErrorKind::PeakNotFound, "measure_shift: no interior peak above half the soliton amplitude");
  }
  const double ym = mag[best - 1], y0 = mag[best], yp = mag[best + 1];
  const double denom = ym - 2.0 * y0 + yp;
  const double offset = denom < 0.0 ? 0.5 * (ym - yp) / denom : 0.0;
  return {lo + step * (static_cast<double>(best) + offset), y0};
}

}  // namespace detail

/// Smallest of {|4 xi_j|} and the nonzero {|4 xi_j - 4 xi_k|}.
inline double velocity_gap(const DressingChain& chain) {
  double gap = std::numeric_limits<double>::infinity();
  const auto& pts = chain.points();
  for (std::size_t j = 0; j < pts.size(); ++j) {
    const double vj = 4.0 * canonical_point(pts[j]).lambda.real();
    if (vj != 0.0) gap = std::min(gap, std::abs(vj));
    for (std::size_t k = 0; k < j; ++k) {
      const double dv = std::abs(vj - 4.0 * canonical_point(pts[k]).lambda.real());
      if (dv != 0.0) gap = std::min(gap, dv);
    }
  }
  if (!std::isfinite(gap)) throw Error(ErrorKind::PeakNotFound, "measure_shift: no soliton moves");
  return gap;
}

/// Default far time 15 / velocity_gap.
inline double default_far_time(const DressingChain& chain) { return 15.0 / velocity_gap(chain); }

/// Measured shift of soliton j between the u-side chain and the u~-side chain.
///
/// At t = -t_far and t = +t_far the soliton is located in both fields near
/// its track x = -4 xi_j t + x_j (window half-width 0.4 * gap * t_far), refined by a three-point parabola on |u|,
/// and its phase is read from the carrier-stripped field
/// u exp(i(2 xi x + 4(xi^2 - eta^2) t)). Comparing both fields at the same
/// instant cancels the collision shifts, which depend on the eigenvalues only.
/// The result is the mean over the two far times.
inline ShiftPrediction measure_shift(const DressingChain& right, const DressingChain& left, std::size_t j,
                                     const ShiftMeasureOptions& opts = {}) {
  if (j >= right.size() || right.size() != left.size()) {
    throw Error(ErrorKind::DimensionMismatch, "measure_shift: soliton index out of range");
  }
  const SpectralPoint sp = canonical_point(right.points()[j]);
  const double xi = sp.lambda.real();
  const double eta = sp.lambda.imag();
  if (xi == 0.0) throw Error(ErrorKind::PeakNotFound, "measure_shift: soliton with zero velocity never crosses the defect");
  const double t_far = opts.t_far.value_or(default_far_time(right));
  if (!(t_far > 0.0) || !std::isfinite(t_far)) throw Error(ErrorKind::InvalidParameter, "measure_shift: t_far must be positive");
  if (!(opts.grid_step > 0.0)) throw Error(ErrorKind::InvalidParameter, "measure_shift: grid step must be positive");

  double x_est = 0.0;
  if (sp.init.a != Complex{} && sp.init.b != Complex{}) x_est = init_to_norming(DressingChain({sp}, Side::right))[0].x();
  const double half_width = 0.4 * velocity_gap(right) * t_far;
  const double min_height = 0.5 * 2.0 * eta;

  double dx_sum = 0.0;
  Complex phase_sum{};
  for (const double tau : {-t_far, t_far}) {
    const double track = -4.0 * xi * tau + x_est;
    auto stripped = [&](const DressingChain& chain, double x) {
      return dressed_field(chain, tau, x) * std::exp(Complex{0.0, 2.0 * xi * x + 4.0 * (xi * xi - eta * eta) * tau});
    };
    const auto pr = detail::locate_peak([&](double x) { return dressed_field(right, tau, x); }, track - half_width,
                                        track + half_width, opts.grid_step, min_height);
    const auto pl = detail::locate_peak([&](double x) { return dressed_field(left, tau, x); }, track - half_width,
                                        track + half_width, opts.grid_step, min_height);
    dx_sum += pl.center - pr.center;
    const Complex ratio = stripped(right, pr.center) / stripped(left, pl.center);
    phase_sum += ratio / std::abs(ratio);
  }
  return {dx_sum / 2.0, wrap_phase(std::arg(phase_sum))};
}

inline ShiftPrediction measure_shift(const PairedSystem& sys, std::size_t j, const ShiftMeasureOptions& opts = {}) {
  return measure_shift(sys.right, sys.left, j, opts);
}

}  // namespace defect_nls
