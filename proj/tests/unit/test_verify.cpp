#include <cmath>
#include <numbers>

#include "doctest.h"
#include "shapeinv/errors.hpp"
#include "shapeinv/verify.hpp"

using namespace shapeinv;
using std::numbers::pi;

namespace {

VerifyOptions opts(int trials, std::uint64_t seed) {
  VerifyOptions o;
  o.trials = trials;
  o.seed = seed;
  return o;
}

// Closed forms for the harmonic kind derived by expanding sum W_i^2 with
// W_i = -alpha sum' 1/x_ij + beta sum' x_ij (used only as test oracles).
double hc_quadratic(double beta, int n) { return beta * beta * n / 2.0; }
double hc_constant(double beta, double alpha, int n) { return -beta * n * (n - 1) * (alpha * n + 1); }
double hc_remainder(double beta, int n) { return beta * n * (n - 1) * (n + 2); }

}  // namespace

TEST_CASE("factorization residual examples") {
  CHECK(factorization_residual(make_nbody_model(ModelKind::calogero, 4, 1.5), opts(100, 1)).max_residual < 1e-8);
  CHECK(factorization_residual(make_nbody_model(ModelKind::calogero_sutherland, 5, 2.0), opts(100, 1)).max_residual <
        1e-8);
  CHECK(factorization_residual(make_nbody_model(ModelKind::calogero_sutherland, 2, 1.0), opts(100, 1)).max_residual <
        1e-12);
}

TEST_CASE("shape invariance residual examples") {
  auto r = shape_invariance_residual(make_nbody_model(ModelKind::calogero_sutherland, 3, 1.0), opts(100, 2));
  CHECK(r.details.at("R") == doctest::Approx(24.0));
  CHECK(r.max_residual < 1e-8);
  CHECK(r.pass);
  auto r2 = shape_invariance_residual(make_nbody_model(ModelKind::calogero_sutherland, 2, 1.0), opts(50, 2));
  CHECK(r2.details.at("R") == doctest::Approx(6.0));
  auto rc = shape_invariance_residual(make_nbody_model(ModelKind::calogero, 3, 2.0), opts(100, 2));
  CHECK(rc.details.at("R") == 0.0);
  CHECK(rc.details.at("alpha_1") == 3.0);
  CHECK(rc.max_residual < 1e-8);
}

TEST_CASE("commutator examples and reports") {
  for (auto kind : {ModelKind::calogero, ModelKind::calogero_sutherland}) {
    auto r = commutator_check(make_nbody_model(kind, 3, 1.5), opts(30, 3));
    CHECK(r.max_residual < 1e-10);
  }
  auto rh = commutator_check(make_nbody_model(ModelKind::harmonic_calogero, 3, 1.5, 0.8), opts(30, 3));
  CHECK(rh.max_residual < 1e-10);
}

TEST_CASE("momentum commutation") {
  CHECK(momentum_commutation(make_nbody_model(ModelKind::calogero, 3, 1.0), opts(50, 4)).max_residual < 1e-10);
  CHECK(momentum_commutation(make_nbody_model(ModelKind::calogero_sutherland, 4, 2.0), opts(50, 4)).max_residual <
        1e-10);
  CHECK(momentum_commutation(make_nbody_model(ModelKind::harmonic_calogero, 2, 1.0, 1.0), opts(50, 4)).max_residual <
        1e-10);
}

TEST_CASE("three-body identities") {
  CHECK(three_body_cancellation(ThreeBodyKind::rational, 0.3, 1.1, 2.7).absolute < 1e-12);
  // a = 0.4, b = 0.7, c = -1.1
  CHECK(three_body_cancellation(ThreeBodyKind::trigonometric, 1.1, 0.7, 0.0).absolute < 1e-12);
  auto near = three_body_cancellation(ThreeBodyKind::rational, 0.3, 0.3 + 1e-5, 2.7);
  CHECK(near.relative < 1e-7);
  CHECK(near.condition > 1e4);
  CHECK_THROWS_AS(three_body_cancellation(ThreeBodyKind::rational, 0.3, 0.3, 2.7), SingularConfiguration);
  CHECK(three_body_report(ThreeBodyKind::rational, opts(1000, 5)).max_residual < 1e-12);
  CHECK(three_body_report(ThreeBodyKind::trigonometric, opts(1000, 5)).max_residual < 1e-12);
}

TEST_CASE("constant fit: calogero-sutherland constant") {
  auto f2 = constant_fit_diagnostic(make_nbody_model(ModelKind::calogero_sutherland, 2, 1.0), opts(100, 6));
  CHECK(f2.c_hat == doctest::Approx(-2.0).epsilon(1e-10));
  CHECK(f2.pass);
  auto f3 = constant_fit_diagnostic(make_nbody_model(ModelKind::calogero_sutherland, 3, 1.0), opts(100, 6));
  CHECK(f3.c_hat == doctest::Approx(-8.0).epsilon(1e-10));
  CHECK(f3.r_hat == doctest::Approx(24.0).epsilon(1e-10));
  auto fc = constant_fit_diagnostic(make_nbody_model(ModelKind::calogero, 4, 2.5), opts(100, 6));
  CHECK(std::abs(fc.c_hat) < 1e-9);
  CHECK(fc.pass);
}

TEST_CASE("constant fit: harmonic kind recovers the derived closed forms") {
  for (int n = 2; n <= 5; ++n) {
    for (double alpha : {1.0, 2.0}) {
      auto m = make_nbody_model(ModelKind::harmonic_calogero, n, alpha, 1.0);
      auto fit = constant_fit_diagnostic(m, opts(120, 7));
      CHECK(fit.pass);
      CHECK(*fit.q_hat == doctest::Approx(hc_quadratic(m.beta(), n)).epsilon(1e-9));
      CHECK(fit.c_hat == doctest::Approx(hc_constant(m.beta(), alpha, n)).epsilon(1e-9));
      CHECK(fit.r_hat == doctest::Approx(hc_remainder(m.beta(), n)).epsilon(1e-9));
      // With the reference beta the reference quadratic coefficient is off by a factor 2.
      CHECK(*fit.q_hat == doctest::Approx(0.5 * *fit.q_reference).epsilon(1e-9));
    }
  }
}

TEST_CASE("harmonic kind with beta = omega / sqrt(2N) matches the reference c and quadratic term") {
  for (int n = 2; n <= 4; ++n) {
    const double omega = 1.3;
    auto m = make_nbody_model(ModelKind::harmonic_calogero, n, 1.5, omega, omega / std::sqrt(2.0 * n));
    auto fit = constant_fit_diagnostic(m, opts(100, 8));
    CHECK(*fit.q_hat == doctest::Approx(*fit.q_reference).epsilon(1e-9));
    CHECK(fit.c_hat == doctest::Approx(fit.c_reference).epsilon(1e-9));
    // The reference remainder is still short by 2 beta N (N - 1).
    CHECK(fit.r_hat - *fit.r_reference == doctest::Approx(2 * m.beta() * n * (n - 1)).epsilon(1e-9));
    auto fr = factorization_residual(m, opts(50, 8));
    CHECK(fr.pass);
  }
}

TEST_CASE("harmonic factorization and shape invariance use fitted values") {
  auto m = make_nbody_model(ModelKind::harmonic_calogero, 3, 1.0, 1.0);
  auto f = factorization_residual(m, opts(100, 9));
  CHECK(f.pass);
  auto s = shape_invariance_residual(m, opts(100, 9));
  CHECK(s.pass);
  CHECK(s.details.at("R") == doctest::Approx(hc_remainder(m.beta(), 3)).epsilon(1e-9));
}

TEST_CASE("prepotential invariants, jacobi equivalence, jastrow") {
  for (auto kind : {ModelKind::calogero, ModelKind::calogero_sutherland}) {
    for (int n = 2; n <= 6; ++n) {
      auto m = make_nbody_model(kind, n, 1.5);
      CHECK(prepotential_invariants(m, opts(100, 10)).max_residual < 1e-12);
      CHECK(jacobi_equivalence(m, opts(20, 10)).max_residual < 1e-12);
    }
    for (int n = 2; n <= 4; ++n)
      for (double alpha : {1.0, 2.0})
        CHECK(jastrow_residual(make_nbody_model(kind, n, alpha), opts(50, 11)).max_residual < 1e-8);
  }
}

TEST_CASE("reports are deterministic and serialize") {
  auto m = make_nbody_model(ModelKind::calogero_sutherland, 3, 1.5);
  auto a = factorization_residual(m, opts(40, 99));
  auto b = factorization_residual(m, opts(40, 99));
  CHECK(a.max_residual == b.max_residual);
  CHECK(a.mean_residual == b.mean_residual);
  CHECK(a.worst.x == b.worst.x);
  CHECK(a.max_residual >= a.mean_residual);
  CHECK(a.mean_residual >= 0.0);
  auto j = to_json(a);
  for (const char* key : {"identity", "model", "seed", "trials", "max_residual", "mean_residual", "pass",
                          "worst_sample"})
    CHECK(j.contains(key));
  CHECK(j["seed"].get<std::uint64_t>() == 99);
}

TEST_CASE("suite has six reports; tiny tolerance fails") {
  auto m = make_nbody_model(ModelKind::calogero_sutherland, 3, 1.0);
  auto reports = run_verify_suite(m, opts(50, 7));
  CHECK(reports.size() == 6);
  for (const auto& r : reports) CHECK_MESSAGE(r.pass, r.identity);
  VerifyOptions strict = opts(50, 7);
  strict.tol_identity = strict.tol_structural = strict.tol_exact = 1e-20;
  auto bad = run_verify_suite(m, strict);
  bool any_fail = false;
  for (const auto& r : bad) any_fail |= !r.pass;
  CHECK(any_fail);
}

TEST_CASE("factorization and shape invariance over the acceptance grid") {
  for (auto kind : {ModelKind::calogero, ModelKind::calogero_sutherland})
    for (int n = 2; n <= 6; ++n)
      for (double alpha : {1.0, 1.5, 2.0, 3.0}) {
        auto m = make_nbody_model(kind, n, alpha);
        CHECK(factorization_residual(m, opts(100, 12)).max_residual < 1e-8);
        CHECK(shape_invariance_residual(m, opts(100, 12)).max_residual < 1e-8);
      }
}
