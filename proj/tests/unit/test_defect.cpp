#include "catch_amalgamated.hpp"
#include "test_support.hpp"

using namespace defect_nls;
using test_support::centered_init;
using test_support::Gen;

namespace {

auto has_kind(ErrorKind k) {
  return Catch::Matchers::Predicate<Error>([k](const Error& e) { return e.kind() == k; }, "error kind");
}

const DefectParams kUnit{0.0, 1.0, Branch::plus};

/// Two solitons with opposite velocities crossing x = 0 away from each other.
std::vector<SpectralPoint> crossing_pair() {
  return {{Complex{1, 1}, centered_init(1, -2)}, {Complex{-1, 1}, centered_init(1, 4)}};
}

}  // namespace

TEST_CASE("lambda0 examples", "[defect]") {
  CHECK(lambda0({0.0, 1.0, Branch::plus}) == Complex{0.0, -0.5});
  CHECK(lambda0({1.0, 1.0, Branch::plus}) == Complex{-0.5, -0.5});
  CHECK(lambda0({0.0, 1.0, Branch::minus}) == Complex{0.0, 0.5});
}

TEST_CASE("DefectParams validation", "[defect][error]") {
  CHECK_THROWS_MATCHES(lambda0({2.0, 0.0, Branch::plus}), Error, has_kind(ErrorKind::InvariantViolation));
  CHECK_THROWS_MATCHES(g0_eval({2.0, 0.0, Branch::plus}, 0.0, 0.0, 1.0), Error, has_kind(ErrorKind::InvariantViolation));
  CHECK_THROWS_MATCHES(lambda0({0.0, 5e-10, Branch::plus}), Error, has_kind(ErrorKind::InvariantViolation));
  CHECK_NOTHROW(lambda0({0.0, 2e-9, Branch::plus}));
}

TEST_CASE("g0_eval examples", "[defect]") {
  CHECK(g0_eval(kUnit, 0.0, 0.0, 0.0) == Mat2C::diag(kI, -kI));
  const DefectParams p{0.3, -1.7, Branch::minus};
  CHECK(g0_eval(p, 0.0, 0.0, lambda0(p)).m11 == Complex{});
  Gen g(41);
  for (int i = 0; i < 50; ++i) {
    const Complex l = g.complex(-2, 2);
    const Complex l0 = lambda0(p);
    CHECK(std::abs(mat_det(g0_eval(p, 0, 0, l)) - 4.0 * (l - l0) * (l - std::conj(l0))) < 1e-12);
    CHECK(max_abs(g0_eval(p, 0, 0, l) - b_infinity(p, l)) < 1e-15);
  }
  CHECK_THROWS_MATCHES(g0_eval(kUnit, 0.1, 0.0, 1.0), Error, has_kind(ErrorKind::UnsupportedSeed));
  CHECK_THROWS_MATCHES(g0_eval(kUnit, 0.0, kI, 1.0), Error, has_kind(ErrorKind::UnsupportedSeed));
}

TEST_CASE("b_infinity examples", "[defect]") {
  CHECK(b_infinity(kUnit, 0.0) == Mat2C::diag(kI, -kI));
  const DefectParams p{0.8, 2.0, Branch::plus};
  CHECK(b_infinity(p, lambda0(p)).m11 == Complex{});
  const Mat2C b = b_infinity(p, Complex{0.3, 0.1});
  CHECK(b.m12 == Complex{});
  CHECK(b.m21 == Complex{});
}

TEST_CASE("pair_init_vectors examples", "[defect]") {
  const SpectralPoint sp{kI, {1.0, 1.0}};
  auto multiplier = [&](const DefectParams& p) {
    const auto paired = pair_init_vectors(p, sp);
    return (paired.init.a / paired.init.b) / (sp.init.a / sp.init.b);
  };
  CHECK(std::abs(multiplier(kUnit) - 3.0) < 1e-15);
  CHECK(std::abs(multiplier({0.0, 1.0, Branch::minus}) - 1.0 / 3.0) < 1e-15);
  CHECK(std::abs(multiplier({0.0, 1e-8, Branch::plus}) - 1.0) < 1e-7);
  CHECK(pair_init_vectors(kUnit, sp).lambda == sp.lambda);

  const DefectParams p{0.4, 1.2, Branch::plus};
  CHECK_THROWS_MATCHES(pair_init_vectors(p, {lambda0(p), {1.0, 1.0}}), Error, has_kind(ErrorKind::ForbiddenEigenvalue));
  CHECK_THROWS_MATCHES(pair_init_vectors(p, {std::conj(lambda0(p)), {1.0, 1.0}}), Error,
                       has_kind(ErrorKind::ForbiddenEigenvalue));
}

TEST_CASE("build_paired_system examples", "[defect]") {
  const auto empty = build_paired_system(kUnit, {});
  CHECK(empty.right.empty());
  CHECK(empty.left.empty());
  CHECK(empty.lambda0 == Complex{0.0, -0.5});
  CHECK(empty.psi0.lambda == empty.lambda0);
  CHECK(empty.psi0.init == Vec2C{1.0, 0.0});
  CHECK(max_abs(gn_eval(empty, 0.7, Complex{0.2, 0.3}) - 0.5 * g0_eval(kUnit, 0, 0, Complex{0.2, 0.3})) < 1e-15);

  const auto one = build_paired_system(kUnit, {{kI, {1.0, 1.0}}});
  const Vec2C left = one.left.points()[0].init;
  CHECK(std::abs(left.a / left.b - 3.0) < 1e-15);
  CHECK(std::abs(left.a - 1.5 * kI) < 1e-15);

  CHECK_THROWS_MATCHES(build_paired_system(kUnit, {{kI, {1.0, 1.0}}, {kI, {1.0, 2.0}}}), Error,
                       has_kind(ErrorKind::DuplicateEigenvalue));
  CHECK_THROWS_MATCHES(build_paired_system(kUnit, {{Complex{0.0, 0.5}, {1.0, 1.0}}}), Error,
                       has_kind(ErrorKind::ForbiddenEigenvalue));
  CHECK_THROWS_MATCHES(build_paired_system(kUnit, {{kI, {1.0, 1.0}}}, {0.0, 0.0}), Error, has_kind(ErrorKind::ZeroVector));
}

TEST_CASE("gn_eval invariants on random paired systems", "[defect][property]") {
  Gen g(42);
  for (int trial = 0; trial < 6; ++trial) {
    const DefectParams p{g.real(-1, 1), g.real(0.5, 3) * (trial % 2 ? -1 : 1), trial % 3 ? Branch::plus : Branch::minus};
    const auto sys = build_paired_system(p, g.points(1 + trial % 3));
    for (int i = 0; i < 10; ++i) {
      const double t = g.real(-5, 5);
      const Complex l = g.complex(-2, 2);
      CHECK(det_invariance_residual(sys, t, l) <= 1e-10);
      CHECK(permutability_residual(sys, t, l) <= 1e-9);
      CHECK(kernel_transport_residual(sys, t) <= 1e-9);

      const Mat2C c = gn_polynomial(sys, t).constant;
      CHECK(max_abs(gn_eval(sys, t, l) - (l * Mat2C::identity() + c)) <= 1e-9);
      const Complex jump = sys.left_field(t, 0.0) - sys.right_field(t, 0.0);
      CHECK(std::abs(c.m12 - (-kI * jump / 2.0)) <= 1e-10);
    }
  }
}

TEST_CASE("gn_eval is singular at the dressing eigenvalues", "[defect][error]") {
  const auto sys = build_paired_system(kUnit, crossing_pair());
  CHECK_THROWS_MATCHES(gn_eval(sys, 0.3, Complex{1, 1}), Error, has_kind(ErrorKind::SingularDressing));
  CHECK_THROWS_MATCHES(gn_eval(sys, 0.3, Complex{-1, -1}), Error, has_kind(ErrorKind::SingularDressing));
}

TEST_CASE("omega examples", "[defect]") {
  CHECK(omega({0.0, -2.5, Branch::plus}, Complex{0.3, 1}, Complex{0.3, 1}) == 2.5);
  CHECK(omega(kUnit, 0.0, 1.0) == 0.0);
  CHECK(std::abs(omega({0.0, 2.0, Branch::plus}, 0.0, Complex{1, 1}) - std::sqrt(2.0)) < 1e-15);
  CHECK(omega(kUnit, 0.0, 1.0 + 1e-12) == 0.0);
  CHECK_THROWS_MATCHES(omega(kUnit, 0.0, 1.1), Error, has_kind(ErrorKind::ComplexOmega));
}

TEST_CASE("defect residual vanishes without solitons", "[defect]") {
  const auto sys = build_paired_system({0.5, 3.0, Branch::plus}, {});
  for (double t : {-1.0, 0.0, 2.0}) {
    const auto r = defect_residual(sys, t);
    CHECK(r.r1 == 0.0);
    CHECK(r.r2 == 0.0);
  }
}

TEST_CASE("defect residuals for crossing solitons on the declared branch", "[defect]") {
  for (double alpha : {0.0, 0.5}) {
    for (double beta : {1.0, 3.0}) {
      const DefectParams p{alpha, beta, Branch::plus};
      for (const auto& pts : {std::vector<SpectralPoint>{{Complex{1, 1}, {1.0, 1.0}}}, crossing_pair()}) {
        const auto sys = build_paired_system(p, pts);
        for (double t = -3.0; t <= 3.0; t += 0.5) {
          CHECK(defect_residual(sys, t).max() <= 1e-6);
          CHECK(realized_branch(sys, t) == Branch::plus);
        }
      }
    }
  }
}

TEST_CASE("stationary soliton at the defect realizes the opposite branch", "[defect]") {
  // lambda = i, init (1, 1), alpha = 0, beta = 1: the soliton never leaves x = 0 and the
  // dressed boundary matrix carries Im G11 < 0, so the conditions hold with the lower sign.
  const auto sys = build_paired_system(kUnit, {{kI, {1.0, 1.0}}});
  for (double t : {-2.0, -1.0, 0.0, 1.0, 2.0}) {
    CHECK(realized_branch(sys, t) == Branch::minus);
    CHECK(defect_residual_realized(sys, t).max() <= 1e-6);
    CHECK(defect_residual_with_sign(sys, t, -1.0).max() <= 1e-6);
    CHECK(defect_residual(sys, t).max() > 1e-2);
  }
  // With beta = 3 the same soliton keeps the declared branch.
  const auto wide = build_paired_system({0.0, 3.0, Branch::plus}, {{kI, {1.0, 1.0}}});
  for (double t : {-2.0, -1.0, 0.0, 1.0, 2.0}) CHECK(defect_residual(wide, t).max() <= 1e-6);
}

TEST_CASE("realized-branch residuals vanish on random paired systems", "[defect][property]") {
  Gen g(43);
  for (int trial = 0; trial < 8; ++trial) {
    const DefectParams p{g.real(-1, 1), g.real(0.5, 3), trial % 2 ? Branch::plus : Branch::minus};
    const auto sys = build_paired_system(p, g.points(1 + trial % 3));
    for (double t = -3.0; t <= 3.0; t += 1.5) {
      CHECK(defect_residual_realized(sys, t).max() <= 1e-6);
      CHECK(boundary_constraint_residual(sys, t, g.complex(-2, 2)) <= 1e-6);
    }
  }
}

TEST_CASE("mismatched pairing is caught only by the defect residual", "[defect]") {
  const auto sys = build_paired_system(kUnit, {{kI, {1.0, 1.0}}}, {1.0, 0.0}, Pairing::mismatched);
  double worst = 0.0;
  for (double t = -3.0; t <= 3.0; t += 0.25) {
    worst = std::max(worst, defect_residual(sys, t).r1);
    const Complex l{0.3, 0.4};
    CHECK(permutability_residual(sys, t, l) <= 1e-9);
    CHECK(det_invariance_residual(sys, t, l) <= 1e-10);
    CHECK(kernel_transport_residual(sys, t) <= 1e-9);
    CHECK(boundary_constraint_residual(sys, t, l) <= 1e-6);
  }
  CHECK(worst > 1e-2);
  CHECK_THROWS_MATCHES(gn_polynomial(sys, 0.5), Error, has_kind(ErrorKind::NotDegreeOne));
}

TEST_CASE("gn_form_readout examples", "[defect]") {
  const DefectParams p{0.7, -1.3, Branch::minus};
  const auto r0 = gn_form_readout(build_paired_system(p, {}), 0.0);
  CHECK(std::abs(r0.alpha_hat - 0.7) < 1e-12);
  CHECK(std::abs(r0.beta_sq_hat - 1.69) < 1e-12);
  // Only the product of branch sign and beta is observable.
  CHECK(r0.branch_hat == Branch::plus);
  CHECK(r0.offdiag_jump == Complex{});
  CHECK(gn_form_readout(build_paired_system({0.7, 1.3, Branch::minus}, {}), 0.0).branch_hat == Branch::minus);

  Gen g(44);
  for (int trial = 0; trial < 5; ++trial) {
    const DefectParams q{g.real(-1, 1), g.real(0.5, 3), Branch::plus};
    const auto sys = build_paired_system(q, g.points(2));
    for (double t : {-2.0, 0.0, 1.5}) {
      const auto r = gn_form_readout(sys, t);
      CHECK(std::abs(r.alpha_hat - q.alpha) <= 1e-8);
      CHECK(std::abs(r.beta_sq_hat - q.beta * q.beta) <= 1e-8);
      CHECK(std::abs(r.offdiag_jump - (sys.left_field(t, 0) - sys.right_field(t, 0))) <= 1e-9);
    }
  }
}

TEST_CASE("branch readout at large t matches the declared branch", "[defect]") {
  Gen g(45);
  for (int trial = 0; trial < 6; ++trial) {
    const Branch b = trial % 2 ? Branch::plus : Branch::minus;
    const DefectParams p{g.real(-1, 1), g.real(0.5, 3), b};
    std::vector<SpectralPoint> pts{{Complex{0.8, 0.9}, g.full_vector()}, {Complex{-0.6, 1.1}, g.full_vector()}};
    const auto sys = build_paired_system(p, pts);
    CHECK(gn_form_readout(sys, 50.0).branch_hat == b);
    CHECK(gn_form_readout(sys, -50.0).branch_hat == b);
  }
}

TEST_CASE("destructive solution examples", "[defect]") {
  const auto still = destructive_solution(kUnit, {1.0, 1.0});
  CHECK(std::abs(std::abs(still.left_field(0.0, 0.0)) - 1.0) < 1e-12);
  CHECK(still.amplitude() == 1.0);
  CHECK(still.velocity() == 0.0);
  for (double t : {-5.0, 0.0, 5.0}) {
    CHECK(std::abs(std::abs(still.left_field(t, 0.0)) - 1.0) < 1e-12);
    for (double x : {-3.0, 0.0, 4.0}) CHECK(still.right_field(t, x) == Complex{});
  }
  CHECK_THROWS_MATCHES(destructive_solution(kUnit, {0.0, 0.0}), Error, has_kind(ErrorKind::ZeroVector));

  const auto moving = destructive_solution({0.5, 1.0, Branch::plus}, {1.0, 1.0});
  CHECK(moving.velocity() == 1.0);
  // Peak |u~| = |beta| sits on x = velocity * t.
  for (double t : {-4.0, -1.0, 2.0}) CHECK(std::abs(std::abs(moving.left_field(t, t)) - 1.0) < 1e-8);
}

TEST_CASE("destructive boundary matrix invariants", "[defect]") {
  for (const DefectParams& p : {kUnit, DefectParams{0.5, 1.0, Branch::plus}, DefectParams{-0.3, 2.0, Branch::minus}}) {
    const auto d = destructive_solution(p, {1.0, 1.0});
    for (double t = -3.0; t <= 3.0; t += 0.5) {
      CHECK(defect_residual_realized(d, t).max() <= 1e-6);
      CHECK(kernel_transport_residual(d, t) <= 1e-9);
      CHECK(det_invariance_residual(d, t, Complex{0.4, -0.2}) <= 1e-10);
      CHECK(boundary_constraint_residual(d, t, Complex{0.4, -0.2}) <= 1e-6);
    }
    // alpha = 0 keeps Omega identically zero at x = 0 for a centered soliton.
    if (p.alpha == 0.0 && p.branch == Branch::plus) CHECK(std::abs(std::abs(d.left_field(1.0, 0.0)) - 1.0) < 1e-12);
  }
}
