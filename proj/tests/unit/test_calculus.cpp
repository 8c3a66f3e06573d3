#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "shapeinv/calculus.hpp"
#include "shapeinv/errors.hpp"

using namespace shapeinv;
using std::numbers::pi;

namespace {

NBodyModel model_of(ModelKind kind, int n, double alpha) {
  std::optional<double> omega;
  if (kind == ModelKind::harmonic_calogero) omega = 1.1;
  return make_nbody_model(kind, n, alpha, omega);
}

}  // namespace

TEST_CASE("jet derivatives converge at second order under central differences") {
  for (auto kind : {ModelKind::calogero, ModelKind::calogero_sutherland}) {
    auto m = model_of(kind, 3, 1.5);
    Rng rng(21);
    for (int t = 0; t < 10; ++t) {
      auto f = random_test_function(m, rng);
      auto x = sample_configuration(m, rng);
      const Jet2 j = f(x);
      for (int i = 0; i < 3; ++i) {
        auto err = [&](double h) {
          auto xp = x;
          xp[i] += h;
          return std::abs(f.value(xp) - j.value - h * j.grad[i] - 0.5 * h * h * j.hess(i, i));
        };
        // Taylor remainder with the exact Hessian is O(h^3); without it O(h^2).
        auto err1 = [&](double h) {
          auto xp = x;
          xp[i] += h;
          return std::abs(f.value(xp) - j.value - h * j.grad[i]);
        };
        if (std::abs(j.hess(i, i)) > 1e-3) {
          const double o1 = std::log2(err1(1e-3) / err1(5e-4));
          CHECK(o1 >= 1.9);
        }
        CHECK(err(1e-2) < 1e-4 * std::max(1.0, std::abs(j.value) + j.hess.cwiseAbs().maxCoeff()));
      }
      CHECK((j.hess - j.hess.transpose()).cwiseAbs().maxCoeff() == 0.0);
    }
  }
}

TEST_CASE("annihilator and creator examples") {
  auto c = model_of(ModelKind::calogero, 2, 1.0);
  const std::vector<double> x{0.0, 1.0};
  CHECK(apply_annihilator(c, 0, tf::constant(2, 1.0), x).value == doctest::Approx(1.0));
  CHECK(apply_creator(c, 0, tf::constant(2, 1.0), x).value == doctest::Approx(1.0));

  auto cs = model_of(ModelKind::calogero_sutherland, 2, 1.0);
  const std::vector<double> y{0.2, 1.0};
  auto f = tf::sum(tf::coordinate(2, 0), tf::coordinate(2, 1));
  // W_1 = -cot(x1 - x2) = cot(0.8) since cot is odd.
  CHECK(apply_annihilator(cs, 0, f, y).value == doctest::Approx(1.0 + 1.2 / std::tan(0.8)));

  auto cs2 = model_of(ModelKind::calogero_sutherland, 2, 2.0);
  const std::vector<double> z{0.0, 0.9};
  CHECK(apply_creator(cs2, 0, tf::constant(2, 1.0), z).value == doctest::Approx(2.0 / std::tan(0.9)));
}

TEST_CASE("jet1 gradient of A_i f matches differences") {
  auto m = model_of(ModelKind::calogero_sutherland, 3, 2.0);
  Rng rng(4);
  auto f = random_test_function(m, rng);
  auto x = sample_configuration(m, rng);
  for (int i = 0; i < 3; ++i) {
    auto j1 = apply_annihilator(m, i, f, x);
    for (int k = 0; k < 3; ++k) {
      auto xp = x, xm = x;
      xp[k] += 1e-6;
      xm[k] -= 1e-6;
      const double d = (apply_annihilator(m, i, f, xp).value - apply_annihilator(m, i, f, xm).value) / 2e-6;
      CHECK(d == doctest::Approx(j1.grad[k]).epsilon(1e-6).scale(1.0));
    }
  }
}

TEST_CASE("jastrow state is annihilated by every A_i") {
  for (auto kind : {ModelKind::calogero, ModelKind::harmonic_calogero, ModelKind::calogero_sutherland}) {
    for (int n = 2; n <= 4; ++n) {
      auto m = model_of(kind, n, 2.0);
      auto phi = tf::jastrow(m);
      Rng rng(n);
      for (int t = 0; t < 10; ++t) {
        auto x = sample_configuration(m, rng);
        const Jet2 j = phi(x);
        const double s = residual_scale(m, j, x);
        for (int i = 0; i < n; ++i) CHECK(std::abs(apply_annihilator(m, i, phi, x).value) < 1e-12 * s);
        CHECK(std::abs(apply_hamiltonian_factorized(m, phi, x)) < 1e-10 * s);
        if (kind != ModelKind::harmonic_calogero)
          CHECK(std::abs(apply_hamiltonian_direct(m, phi, x)) < 1e-10 * s);
      }
    }
  }
}

TEST_CASE("hamiltonian examples") {
  auto c = model_of(ModelKind::calogero, 2, 2.0);
  const std::vector<double> x{0.0, 1.0};
  CHECK(apply_hamiltonian_direct(c, tf::constant(2, 1.0), x) == doctest::Approx(4.0));

  // Free CS with a plane wave in the centre of mass.
  auto cs = model_of(ModelKind::calogero_sutherland, 2, 1.0);
  const double k = 1.7;
  auto f = tf::cos(tf::scaled(k, tf::sum(tf::coordinate(2, 0), tf::coordinate(2, 1))));
  const std::vector<double> y{0.3, 1.2};
  CHECK(apply_hamiltonian_direct(cs, f, y) == doctest::Approx((2 * k * k - 2.0) * f.value(y)));
}

TEST_CASE("factorization and shape invariance on random functions") {
  for (auto kind : {ModelKind::calogero, ModelKind::calogero_sutherland}) {
    for (int n = 2; n <= 5; ++n) {
      auto m = model_of(kind, n, 1.5);
      auto m1 = m.shifted();
      const double R = *m.remainder();
      Rng rng(100 + n);
      for (int t = 0; t < 20; ++t) {
        auto f = random_test_function(m, rng);
        auto x = sample_configuration(m, rng);
        const Jet2 j = f(x);
        const double s = residual_scale(m, j, x);
        CHECK(std::abs(apply_hamiltonian_direct(m, j, x) - apply_hamiltonian_factorized(m, j, x)) < 1e-8 * s);
        CHECK(std::abs(apply_partner(m, j, x) - apply_hamiltonian_factorized(m1, j, x) - R * j.value) <
              1e-8 * s);
        CHECK(std::abs(apply_jacobi_hamiltonian(m, j, x) - apply_hamiltonian_factorized(m, j, x)) < 1e-12 * s);
      }
    }
  }
}

TEST_CASE("calogero partner is not the direct hamiltonian at alpha - 1") {
  auto m = model_of(ModelKind::calogero, 3, 2.0);
  auto down = m.with_alpha(1.0);
  auto up = m.shifted();
  const std::vector<double> x{-0.7, 0.4, 1.3};
  auto f = tf::gaussian({0.1, -0.2, 0.3}, 1.0);
  const double partner = apply_partner(m, f, x);
  CHECK(partner == doctest::Approx(apply_hamiltonian_direct(up, f, x)).epsilon(1e-10));
  CHECK(std::abs(partner - apply_hamiltonian_direct(down, f, x)) > 1.0);
}

TEST_CASE("commutators") {
  auto m = model_of(ModelKind::calogero, 3, 1.0);
  const std::vector<double> x{0.0, 1.0, 3.0};
  const Jet2 one = tf::constant(3, 1.0)(x);
  CHECK(commutator(m, create(0), annihilate(1), one, x) == doctest::Approx(2.0));
  CHECK(std::abs(commutator(m, annihilate(0), annihilate(1), one, x)) < 1e-14);

  auto cs = model_of(ModelKind::calogero_sutherland, 2, 1.3);
  const std::vector<double> y{0.4, 1.5};
  const Jet2 o2 = tf::constant(2, 1.0)(y);
  const double s = std::sin(0.4 - 1.5);
  CHECK(commutator(cs, create(0), annihilate(0), o2, y) == doctest::Approx(-2 * 1.3 / (s * s)));
}

TEST_CASE("total momentum") {
  auto m = model_of(ModelKind::calogero, 3, 1.5);
  const std::vector<double> x{-0.5, 0.2, 1.1};
  auto lin = tf::sum(tf::sum(tf::coordinate(3, 0), tf::coordinate(3, 1)), tf::coordinate(3, 2));
  CHECK(total_momentum(m, lin, x) == doctest::Approx(3.0));
  CHECK(std::abs(total_momentum(m, tf::constant(3, 1.0), x)) < 1e-14);
  auto cs = model_of(ModelKind::calogero_sutherland, 2, 1.0);
  const std::vector<double> y{0.3, 0.5};
  auto f = tf::sin(tf::sum(tf::coordinate(2, 0), tf::coordinate(2, 1)));
  CHECK(total_momentum(cs, f, y) == doctest::Approx(2 * std::cos(0.8)));
}

TEST_CASE("jacobi basis") {
  for (int n = 2; n <= 6; ++n) {
    auto o = jacobi_matrix(n);
    CHECK((o * o.transpose() - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-15);
  }
  auto o2 = jacobi_matrix(2);
  CHECK(o2(0, 0) == doctest::Approx(1 / std::sqrt(2.0)));
  CHECK(o2(0, 1) == doctest::Approx(-1 / std::sqrt(2.0)));
  auto m = model_of(ModelKind::calogero_sutherland, 3, 2.0);
  const std::vector<double> x{0.3, 1.2, 2.5};
  CHECK(std::abs(jacobi_action(m, 2, tf::constant(3, 1.0), x).value) < 1e-14);
}

TEST_CASE("operator chains beyond the jet order throw") {
  auto m = model_of(ModelKind::calogero, 2, 1.0);
  const std::vector<double> x{0.0, 1.0};
  auto f = tf::gaussian({0.0, 0.0}, 1.0);
  const std::vector<Op> two{create(0), annihilate(0)};
  const std::vector<Op> three{create(0), annihilate(0), annihilate(1)};
  CHECK(std::isfinite(apply_chain(m, two, f, x)));
  CHECK_THROWS_AS(apply_chain(m, three, f, x), JetOrderError);
  CHECK_THROWS_AS(apply_annihilator(m, 2, f, x), DimensionError);
}
