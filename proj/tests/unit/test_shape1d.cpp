#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "shapeinv/errors.hpp"
#include "shapeinv/shape1d.hpp"

using namespace shapeinv;
using std::numbers::pi;

namespace {

Prepotential1D rm(double b, double a) { return make_prepotential_1d(Family1D::rosen_morse_trig, {b, a}); }

Grid1D box(int cells, double a = 1.0) { return {0.0, pi / a, cells}; }

}  // namespace

TEST_CASE("rosen-morse algebraic spectrum") {
  auto s = algebraic_spectrum(rm(2, 1), 3);
  REQUIRE(s.energies.size() == 4);
  CHECK(s.energies == std::vector<double>{0, 5, 12, 21});
  CHECK(s.params[3] == std::vector<double>{5, 1});
  CHECK(s.remainders == std::vector<double>{5, 7, 9});
  CHECK(algebraic_spectrum(rm(1, 1), 3).energies == std::vector<double>{0, 3, 8, 15});
  CHECK(algebraic_spectrum(rm(2, 1), 0).energies == std::vector<double>{0});
  CHECK_THROWS_AS(algebraic_spectrum(rm(2, 1), -1), DomainError);
}

TEST_CASE("algebraic spectrum matches closed form over a parameter sweep") {
  for (double b : {0.5, 1.0, 1.7, 2.0, 4.25}) {
    for (double a : {0.5, 1.0, 2.0, 3.0}) {
      auto s = algebraic_spectrum(rm(b, a), 10);
      for (int n = 0; n <= 10; ++n) {
        const double exact = (b + n * a) * (b + n * a) - b * b;
        CHECK(std::abs(s.energies[n] - exact) <= 1e-12 * std::max(1.0, exact));
        if (n > 0) CHECK(s.energies[n] >= s.energies[n - 1]);
      }
      CHECK(s.bound_ladder);
      CHECK_FALSE(s.degenerate);
    }
  }
}

TEST_CASE("rational family spectrum is equally spaced") {
  // W = a x + b / x: R = 4a per step.
  auto s = algebraic_spectrum(make_prepotential_1d(Family1D::rational_harmonic, {1.5, -2.0}), 4);
  for (int n = 0; n <= 4; ++n) CHECK(s.energies[n] == doctest::Approx(6.0 * n));
}

TEST_CASE("ground states on the rosen-morse cell") {
  const Grid1D g = box(512);
  auto f = ground_state_1d(rm(2, 1), g);
  CHECK(f.normalizable);
  CHECK(f.warnings.empty());
  CHECK(l2_norm(f) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(f.values.front() == 0.0);
  CHECK(f.values.back() == 0.0);
  // proportional to sin^2 x
  const double ratio = f.values[100] / std::pow(std::sin(f.x[100]), 2);
  for (int k = 1; k < g.cells; k += 37)
    CHECK(f.values[k] == doctest::Approx(ratio * std::pow(std::sin(f.x[k]), 2)).epsilon(1e-12));
  for (int k = 0; k <= g.cells; ++k) CHECK(std::abs(f.values[k] - f.values[g.cells - k]) < 1e-12);

  auto s = ground_state_1d(rm(1, 1), g);
  const double r1 = s.values[200] / std::sin(s.x[200]);
  CHECK(s.values[77] == doctest::Approx(r1 * std::sin(s.x[77])).epsilon(1e-12));
}

TEST_CASE("non-normalizable ground state is flagged but returned") {
  auto f = ground_state_1d(rm(0.4, 1), box(256));
  CHECK_FALSE(f.normalizable);
  CHECK_FALSE(f.warnings.empty());
  CHECK(l2_norm(f) == doctest::Approx(1.0));
}

TEST_CASE("ground state grid must lie inside the natural domain") {
  CHECK_THROWS_AS(ground_state_1d(rm(2, 1), Grid1D{0.0, 4.0, 64}), DomainError);
  CHECK_THROWS_AS(ground_state_1d(rm(2, 1), Grid1D{0.0, pi, 4}), DomainError);
}

TEST_CASE("derivative stencils are fourth order including the edges") {
  std::vector<double> err1, err2;
  for (int m : {40, 80, 160}) {
    const double h = 1.0 / m;
    std::vector<double> u(m + 1);
    for (int k = 0; k <= m; ++k) u[k] = std::exp(std::sin(3.0 * k * h));
    auto d1 = derivative1(u, h);
    auto d2 = derivative2(u, h);
    double e1 = 0, e2 = 0;
    for (int k = 0; k <= m; ++k) {
      const double x = k * h, s = std::sin(3 * x), c = std::cos(3 * x);
      e1 = std::max(e1, std::abs(d1[k] - 3 * c * std::exp(s)));
      e2 = std::max(e2, std::abs(d2[k] - (9 * c * c - 9 * s) * std::exp(s)));
    }
    err1.push_back(e1);
    err2.push_back(e2);
  }
  CHECK(std::log2(err1[1] / err1[2]) > 3.7);
  // The one-sided second derivative is the weakest link (third order).
  CHECK(std::log2(err2[1] / err2[2]) > 2.8);
}

TEST_CASE("wavefunction chain n=0 equals the ground state") {
  const Grid1D g = box(512);
  auto c = wavefunction_chain(rm(2, 1), 0, g);
  auto f = ground_state_1d(rm(2, 1), g);
  for (int k = 0; k <= g.cells; ++k) CHECK(c.values[k] == doctest::Approx(f.values[k]).epsilon(1e-14));
  CHECK(c.boundary_margin == 0);
}

TEST_CASE("wavefunction chain reproduces rosen-morse levels") {
  const Prepotential1D p = rm(2, 1);
  const Grid1D g = box(1024);
  auto s = algebraic_spectrum(p, 4);
  for (int n = 1; n <= 4; ++n) {
    auto psi = wavefunction_chain(p, n, g);
    CHECK(psi.boundary_margin == 2 * n);
    CHECK(rayleigh_quotient(p, psi) == doctest::Approx(s.energies[n]).epsilon(1e-6));
    CHECK(count_nodes(psi) == n);
  }
  auto psi1 = wavefunction_chain(p, 1, g);
  CHECK(rayleigh_quotient(p, psi1) == doctest::Approx(5.0).epsilon(2e-4));
}

TEST_CASE("chain orthogonality on a fine grid") {
  const Prepotential1D p = rm(2, 1);
  const Grid1D g = box(2048);
  std::vector<GridFunction1D> psi;
  for (int n = 0; n <= 3; ++n) psi.push_back(wavefunction_chain(p, n, g));
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) CHECK(std::abs(inner(psi[i], psi[j])) <= 1e-6);
}

TEST_CASE("chain rayleigh quotient converges with order at least 1.9") {
  const Prepotential1D p = rm(2, 1);
  for (int n : {1, 2, 3}) {
    const double exact = (2.0 + n) * (2.0 + n) - 4.0;
    std::vector<double> err;
    for (int m : {512, 1024, 2048}) err.push_back(std::abs(rayleigh_quotient(p, wavefunction_chain(p, n, box(m))) - exact));
    CHECK(std::log2(err[0] / err[1]) >= 1.9);
    CHECK(std::log2(err[1] / err[2]) >= 1.9);
  }
}

TEST_CASE("chain limit and negative n") {
  CHECK_THROWS_AS(wavefunction_chain(rm(2, 1), 7, box(512)), DomainError);
  CHECK_THROWS_AS(wavefunction_chain(rm(2, 1), -1, box(512)), DomainError);
  CHECK_NOTHROW(wavefunction_chain(rm(2, 1), 7, box(512), 8));
}

TEST_CASE("node counting ignores noise below threshold") {
  GridFunction1D f;
  f.x = {0, 1, 2, 3, 4, 5, 6};
  f.values = {0, 1, 1e-14, -1e-14, 1, -1, 0};
  CHECK(count_nodes(f) == 1);
  CHECK(count_nodes(f, 0.0) == 3);
}

TEST_CASE("hierarchy energies and potentials") {
  const Prepotential1D p = rm(2, 1);
  auto h = hierarchy(p, 2);
  REQUIRE(h.size() == 3);
  CHECK(h[0].e0 == 0.0);
  CHECK(h[2].e0 == 12.0);
  CHECK(h[1].potential(pi / 2) - h[0].potential(pi / 2) == doctest::Approx(4.0));
  // H^(1)(a0) is the partner of H^(0)(a0).
  for (double x : {0.3, 1.1, 2.5})
    CHECK(h[1].potential(x) == doctest::Approx(p.partner_potential(x)).epsilon(1e-13));
  CHECK(hierarchy(p, 0).size() == 1);
}

TEST_CASE("two-column export") {
  auto f = ground_state_1d(rm(2, 1), box(16));
  std::ostringstream os;
  write_two_column(os, f);
  std::istringstream is(os.str());
  double x, v;
  int rows = 0;
  while (is >> x >> v) {
    CHECK(x == f.x[rows]);
    CHECK(v == f.values[rows]);
    ++rows;
  }
  CHECK(rows == 17);
}
