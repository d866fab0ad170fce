#pragma once

// verify_all: every invariant of the dressing, defect and scattering layers
// evaluated on the system a RunConfig describes.

#include <chrono>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "defect_nls/grid.hpp"
#include "defect_nls/report.hpp"
#include "defect_nls/scattering.hpp"

namespace defect_nls {

namespace detail {

/// Samples of a check; nullopt marks a check that does not apply to the mode.
using CheckBody = std::function<std::optional<double>(std::mt19937_64&)>;

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  return v;
}

/// Random lambda in [-2,2] x [-2,2] at distance >= 0.05 from every point in avoid.
inline Complex random_lambda(std::mt19937_64& rng, const std::vector<Complex>& avoid) {
  for (;;) {
    const Complex l{uniform(rng, -2.0, 2.0), uniform(rng, -2.0, 2.0)};
    bool ok = true;
    for (const auto& a : avoid) ok = ok && std::abs(l - a) >= 0.05;
    if (ok) return l;
  }
}

inline std::vector<Complex> chain_spectrum(const DressingChain& c) {
  std::vector<Complex> v;
  for (const auto& p : c.points()) {
    v.push_back(p.lambda);
    v.push_back(std::conj(p.lambda));
  }
  return v;
}

inline std::vector<Complex> scenario_spectrum(const Scenario& s) {
  std::vector<Complex> v;
  for (const auto* c : s.chains()) {
    const auto cv = chain_spectrum(*c);
    v.insert(v.end(), cv.begin(), cv.end());
  }
  return v;
}

template <class F>
std::optional<double> on_two_sided(const Scenario& s, F&& f) {
  if (const auto* p = s.paired()) return f(*p);
  if (const auto* d = s.destructive()) return f(*d);
  return std::nullopt;
}

inline bool has_full_amplitudes(const DressingChain& c) {
  for (const auto& p : c.points()) {
    if (p.init.a == Complex{} || p.init.b == Complex{}) return false;
  }
  return true;
}

inline std::optional<double> check_projector_laws(const Scenario& s, std::mt19937_64& rng) {
  double worst = 0.0;
  for (const auto* c : s.chains()) {
    for (int i = 0; i < 10; ++i) {
      const auto st = build_chain_state(*c, uniform(rng, -3, 3), uniform(rng, -3, 3));
      for (const auto& p : st.projectors) {
        worst = std::max({worst, max_abs(p * p - p), max_abs(p - adjoint(p)), std::abs(trace(p) - 1.0)});
      }
    }
  }
  return worst;
}

inline std::optional<double> check_determinant_factorization(const Scenario& s, std::mt19937_64& rng) {
  double worst = 0.0;
  for (const auto* c : s.chains()) {
    const auto avoid = chain_spectrum(*c);
    for (int i = 0; i < 20; ++i) {
      const auto st = build_chain_state(*c, uniform(rng, -3, 3), uniform(rng, -3, 3));
      const Complex l = random_lambda(rng, avoid);
      Complex expected = 1.0;
      for (const auto& p : c->points()) expected *= (l - p.lambda) * (l - std::conj(p.lambda));
      worst = std::max(worst, std::abs(mat_det(eval_DN(st, *c, l)) - expected) / std::abs(expected));
    }
  }
  return worst;
}

inline std::optional<double> check_dressing_symmetry(const Scenario& s, std::mt19937_64& rng) {
  double worst = 0.0;
  const Mat2C sigma_inv = Complex{-1.0} * kSigma;
  for (const auto* c : s.chains()) {
    for (int i = 0; i < 20; ++i) {
      const auto st = build_chain_state(*c, uniform(rng, -3, 3), uniform(rng, -3, 3));
      const Complex l{uniform(rng, -2, 2), uniform(rng, -2, 2)};
      const Mat2C lhs = conj(eval_DN(st, *c, std::conj(l)));
      worst = std::max(worst, max_abs(lhs - kSigma * eval_DN(st, *c, l) * sigma_inv));
    }
  }
  return worst;
}

inline std::optional<double> check_kernel_transport(const Scenario& s, std::mt19937_64&) {
  return on_two_sided(s, [](const auto& sys) {
    double worst = 0.0;
    for (double t : linspace(-3, 3, 13)) worst = std::max(worst, kernel_transport_residual(sys, t));
    return worst;
  });
}

inline std::optional<double> check_permutability(const Scenario& s, std::mt19937_64& rng) {
  const auto* p = s.paired();
  if (p == nullptr) return std::nullopt;
  const auto avoid = scenario_spectrum(s);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double t = uniform(rng, -5, 5);
    worst = std::max(worst, permutability_residual(*p, t, random_lambda(rng, avoid)));
  }
  return worst;
}

inline std::optional<double> check_gn_determinant(const Scenario& s, std::mt19937_64& rng) {
  const auto avoid = scenario_spectrum(s);
  return on_two_sided(s, [&](const auto& sys) {
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      const double t = uniform(rng, -5, 5);
      worst = std::max(worst, det_invariance_residual(sys, t, random_lambda(rng, avoid)));
    }
    return worst;
  });
}

inline std::optional<double> check_defect_residual(const Scenario& s, std::mt19937_64&) {
  const auto ts = linspace(-3, 3, 25);
  if (const auto* p = s.paired()) {
    double worst = 0.0;
    for (double t : ts) worst = std::max(worst, defect_residual(*p, t).max());
    return worst;
  }
  if (const auto* d = s.destructive()) {
    double worst = 0.0;
    for (double t : ts) worst = std::max(worst, defect_residual_realized(*d, t).max());
    return worst;
  }
  return std::nullopt;
}

inline std::optional<double> check_omega_admissibility(const Scenario& s, std::mt19937_64&) {
  return on_two_sided(s, [](const auto& sys) {
    double worst = 0.0;
    const double b2 = sys.defect.beta * sys.defect.beta;
    for (double t : linspace(-3, 3, 25)) {
      worst = std::max(worst, std::norm(sys.left_field(t, 0.0) - sys.right_field(t, 0.0)) - b2);
    }
    return worst;
  });
}

inline std::optional<double> check_boundary_constraint(const Scenario& s, std::mt19937_64& rng) {
  const auto avoid = scenario_spectrum(s);
  return on_two_sided(s, [&](const auto& sys) {
    double worst = 0.0;
    for (double t : linspace(-3, 3, 7)) {
      for (int k = 0; k < 2; ++k) worst = std::max(worst, boundary_constraint_residual(sys, t, random_lambda(rng, avoid)));
    }
    return worst;
  });
}

inline std::optional<double> check_nls_residual(const Scenario& s, std::mt19937_64& rng) {
  double worst = 0.0;
  for (const auto* c : s.chains()) {
    auto field = [c](double t, double x) { return dressed_field(*c, t, x); };
    for (int i = 0; i < 100; ++i) {
      const double t = uniform(rng, -3, 3);
      worst = std::max(worst, nls_residual(field, t, uniform(rng, -3, 3), default_residual_derivatives()));
    }
  }
  return worst;
}

inline std::optional<double> check_oracle_equivalence(const Scenario& s, std::mt19937_64&) {
  std::optional<double> worst;
  for (const auto* c : s.chains()) {
    if (c->empty() || !has_full_amplitudes(*c)) continue;
    const auto data = init_to_norming(*c);
    double w = 0.0;
    for (double t : linspace(-2, 2, 21)) {
      for (double x : linspace(-2, 2, 21)) w = std::max(w, std::abs(solve_reflectionless(data, t, x) - dressed_field(*c, t, x)));
    }
    worst = std::max(worst.value_or(0.0), w);
  }
  return worst;
}

inline std::optional<double> check_closed_form_triangle(const Scenario& s, std::mt19937_64&) {
  std::optional<double> worst;
  for (const auto* c : s.chains()) {
    if (c->size() != 1 || !has_full_amplitudes(*c)) continue;
    const auto data = init_to_norming(*c);
    const auto params = one_soliton_params(data[0]);
    double w = 0.0;
    for (double t : linspace(-3, 3, 41)) {
      for (double x : linspace(-3, 3, 41)) {
        const Complex a = dressed_field(*c, t, x);
        const Complex b = solve_reflectionless(data, t, x);
        const Complex closed = one_soliton_closed(params, t, x);
        w = std::max({w, std::abs(a - b), std::abs(a - closed), std::abs(b - closed)});
      }
    }
    worst = std::max(worst.value_or(0.0), w);
  }
  return worst;
}

inline std::optional<double> check_shift_prediction(const Scenario& s, std::mt19937_64&) {
  const auto* p = s.paired();
  if (p == nullptr) return std::nullopt;
  std::optional<double> worst;
  for (std::size_t j = 0; j < p->right.size(); ++j) {
    const Complex l = canonical_point(p->right.points()[j]).lambda;
    if (std::abs(l.real()) < 0.5 || l.imag() < 0.5 || l.imag() > 1.5) continue;
    const auto predicted = predict_transmission(p->defect, l);
    const auto measured = measure_shift(*p, j);
    const double e = std::max(std::abs(measured.dx - predicted.dx), std::abs(wrap_phase(measured.dphi - predicted.dphi)));
    worst = std::max(worst.value_or(0.0), e);
  }
  return worst;
}

inline std::optional<double> check_branch_consistency(const Scenario& s, std::mt19937_64&) {
  return on_two_sided(s, [](const auto& sys) {
    double flips = 0.0;
    for (double t : linspace(-3, 3, 25)) flips += realized_branch(sys, t) != sys.defect.branch ? 1.0 : 0.0;
    return flips;
  });
}

inline CheckBody check_body(std::string_view name, const Scenario& s) {
  using Fn = std::optional<double> (*)(const Scenario&, std::mt19937_64&);
  static const std::vector<std::pair<std::string_view, Fn>> table{
      {"projector_laws", check_projector_laws},
      {"determinant_factorization", check_determinant_factorization},
      {"dressing_symmetry", check_dressing_symmetry},
      {"kernel_transport", check_kernel_transport},
      {"permutability_identity", check_permutability},
      {"gn_determinant_invariance", check_gn_determinant},
      {"defect_residual", check_defect_residual},
      {"omega_admissibility", check_omega_admissibility},
      {"boundary_constraint", check_boundary_constraint},
      {"nls_residual", check_nls_residual},
      {"oracle_equivalence", check_oracle_equivalence},
      {"closed_form_triangle", check_closed_form_triangle},
      {"shift_prediction", check_shift_prediction},
      {"branch_consistency", check_branch_consistency},
  };
  for (const auto& [n, fn] : table) {
    if (n == name) return [fn, &s](std::mt19937_64& rng) { return fn(s, rng); };
  }
  throw Error(ErrorKind::InvalidParameter, "no implementation for check " + std::string(name));
}

}  // namespace detail

/// One record per known check, in a fixed order. Failures never abort the run.
inline Report verify_all(const RunConfig& cfg) {
  Report report;
  std::optional<Scenario> scenario;
  std::string build_error;
  if (cfg.verify.enabled) {
    try {
      scenario.emplace(cfg);
    } catch (const Error& e) {
      build_error = e.what();
    }
  }
  for (std::size_t i = 0; i < kCheckSpecs.size(); ++i) {
    const auto& spec = kCheckSpecs[i];
    CheckRecord rec{std::string(spec.name), CheckStatus::skipped, std::nullopt, cfg.verify.tolerance(spec.name), 0.0, {}};
    if (!cfg.verify.is_enabled(spec.name)) {
      report.push_back(std::move(rec));
      continue;
    }
    const auto start = std::chrono::steady_clock::now();
    if (!scenario) {
      rec.status = CheckStatus::fail;
      rec.note = build_error;
    } else {
      std::mt19937_64 rng(cfg.verify.seed + i);
      try {
        rec.measured = detail::check_body(spec.name, *scenario)(rng);
        if (!rec.measured) {
          rec.status = CheckStatus::skipped;
          rec.note = "not applicable in this mode";
        } else {
          rec.status = *rec.measured <= *rec.tolerance ? CheckStatus::pass : CheckStatus::fail;
        }
      } catch (const Error& e) {
        rec.status = CheckStatus::fail;
        rec.note = e.what();
      }
    }
    rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report.push_back(std::move(rec));
  }
  return report;
}

}  // namespace defect_nls
