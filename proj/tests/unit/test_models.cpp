#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "shapeinv/errors.hpp"
#include "shapeinv/models.hpp"
#include "shapeinv/random.hpp"

using namespace shapeinv;
using std::numbers::pi;

namespace {

// Central difference oracle, independent of the analytic derivative.
template <class F>
double fd(F f, double x, double h = 1e-5) {
  return (f(x + h) - f(x - h)) / (2 * h);
}

}  // namespace

TEST_CASE("rosen-morse prepotential values and parameter map") {
  auto p = make_prepotential_1d(Family1D::rosen_morse_trig, {2.0, 1.0});
  CHECK(std::abs(p.W(pi / 2)) < 1e-15);
  CHECK(p.next_params() == std::vector<double>{3.0, 1.0});
  CHECK(p.remainder_next().value == doctest::Approx(5.0).epsilon(1e-15));
  auto box = make_prepotential_1d(Family1D::rosen_morse_trig, {1.0, 1.0});
  CHECK(box.remainder_next().value == doctest::Approx(3.0));
  const std::vector<double> flat{0.5, 0.0};
  auto r = remainder_1d(Family1D::rosen_morse_trig, flat);
  CHECK(r.value == 0.0);
  CHECK(r.degenerate);
}

TEST_CASE("rational prepotential") {
  auto p = make_prepotential_1d(Family1D::rational_harmonic, {1.0, 2.0});
  CHECK(p.W(1.0) == doctest::Approx(3.0));
  CHECK(p.next_params() == std::vector<double>{1.0, 1.0});
  CHECK(p.remainder_next().value == doctest::Approx(4.0));
}

TEST_CASE("non-admissible 1-D parameters are rejected") {
  CHECK_THROWS_AS(make_prepotential_1d(Family1D::rosen_morse_trig, {2.0, 0.0}), DomainError);
  CHECK_THROWS_AS(make_prepotential_1d(Family1D::rosen_morse_trig, {2.0, -1.0}), DomainError);
  CHECK_THROWS_AS(make_prepotential_1d(Family1D::coth_hyperbolic, {2.0, 0.0}), DomainError);
  CHECK_THROWS_AS(make_prepotential_1d(Family1D::rational_harmonic, {0.0, 1.0}), DomainError);
  CHECK_THROWS_AS(make_prepotential_1d(Family1D::sign, {0.0}), DomainError);
  CHECK_THROWS_AS(make_prepotential_1d(Family1D::sign, {1.0, 2.0}), DomainError);
  CHECK_THROWS_AS(family_from_string("morse"), ConfigError);
}

TEST_CASE("1-D families: odd W, derivative, and shape invariance pointwise") {
  struct Case {
    Family1D fam;
    std::vector<double> p;
    double lo, hi;
  };
  const std::vector<Case> cases{
      {Family1D::rosen_morse_trig, {2.0, 1.0}, 0.1, 3.0},
      {Family1D::rosen_morse_trig, {1.3, 0.7}, 0.1, 4.3},
      {Family1D::rational_harmonic, {0.8, -1.5}, 0.2, 3.0},
      {Family1D::rational_harmonic, {1.0, 2.0}, 0.2, 3.0},
      {Family1D::sign, {1.5}, 0.1, 3.0},
      {Family1D::coth_hyperbolic, {2.0, 0.5}, 0.1, 3.0},
  };
  Rng rng(11);
  for (const auto& c : cases) {
    auto p = make_prepotential_1d(c.fam, c.p);
    auto q = p.next();
    const double R = p.remainder_next().value;
    CHECK(q.family() == p.family());
    for (int k = 0; k < 50; ++k) {
      const double x = rng.uniform(c.lo, c.hi);
      CHECK(p.W(-x) == doctest::Approx(-p.W(x)).epsilon(1e-13));
      CHECK(p.dW(x) == doctest::Approx(fd([&](double t) { return p.W(t); }, x)).epsilon(1e-6));
      // Partner potential equals the shifted potential plus R.
      CHECK(p.partner_potential(x) == doctest::Approx(q.potential(x) + R).epsilon(1e-11));
      // Ground state is the zero mode of A = d + W.
      const double g = p.ground_state(x);
      const double dg = fd([&](double t) { return p.ground_state(t); }, x, 1e-6);
      CHECK(std::abs(dg + p.W(x) * g) < 1e-6 * std::max(1.0, std::abs(g) + std::abs(dg)));
    }
  }
}

TEST_CASE("rosen-morse parameter map iterates additively") {
  auto p = make_prepotential_1d(Family1D::rosen_morse_trig, {0.75, 0.5});
  for (int n = 1; n <= 10; ++n) {
    p = p.next();
    CHECK(p.param(0) == 0.75 + n * 0.5);
    CHECK(p.param(1) == 0.5);
  }
}

TEST_CASE("1-D ground-state flags") {
  CHECK(make_prepotential_1d(Family1D::rosen_morse_trig, {2.0, 1.0}).ground_state_normalizable());
  CHECK_FALSE(make_prepotential_1d(Family1D::rosen_morse_trig, {0.4, 1.0}).ground_state_normalizable());
  CHECK_FALSE(make_prepotential_1d(Family1D::coth_hyperbolic, {2.0, 1.0}).has_bound_ladder());
  CHECK_FALSE(make_prepotential_1d(Family1D::sign, {1.0}).has_bound_ladder());
  CHECK(make_prepotential_1d(Family1D::sign, {1.0}).remainder_next().degenerate);
}

TEST_CASE("n-body model constants") {
  CHECK(make_nbody_model(ModelKind::calogero, 3, 2.0).g() == 4.0);
  CHECK(make_nbody_model(ModelKind::calogero_sutherland, 3, 1.0).c() == doctest::Approx(-8.0));
  auto cs2 = make_nbody_model(ModelKind::calogero_sutherland, 2, 1.0);
  CHECK(cs2.g() == 0.0);
  CHECK(cs2.c() == doctest::Approx(-2.0));
  CHECK(*cs2.remainder() == doctest::Approx(6.0));
  CHECK(*make_nbody_model(ModelKind::calogero_sutherland, 3, 1.0).remainder() == doctest::Approx(24.0));
  CHECK(*make_nbody_model(ModelKind::calogero, 3, 2.0).remainder() == 0.0);
  auto hc = make_nbody_model(ModelKind::harmonic_calogero, 4, 1.0, 2.0);
  CHECK(hc.beta() == doctest::Approx(2.0 / (2.0 * 2.0)));
  CHECK_FALSE(hc.remainder().has_value());
  CHECK(hc.quadratic_coupling() == doctest::Approx(1.0));
  CHECK(make_nbody_model(ModelKind::harmonic_calogero, 4, 1.0, 2.0, 0.3).beta() == 0.3);
  // Shifting keeps the same beta.
  CHECK(hc.shifted().beta() == hc.beta());
  CHECK(hc.shifted().alpha() == 2.0);
}

TEST_CASE("n-body model validation") {
  CHECK_THROWS_AS(make_nbody_model(ModelKind::calogero, 1, 1.0), ConfigError);
  CHECK_THROWS_AS(make_nbody_model(ModelKind::harmonic_calogero, 2, 1.0), ConfigError);
  CHECK_THROWS_AS(make_nbody_model(ModelKind::calogero, 2, 1.0, 1.0), ConfigError);
  auto m = make_nbody_model(ModelKind::calogero, 3, 1.0);
  const std::vector<double> bad{0.0, 1.0, 1.0};
  CHECK_THROWS_AS(m.prepotential(bad), SingularConfiguration);
  const std::vector<double> wrong_size{0.0, 1.0};
  CHECK_THROWS_AS(m.prepotential(wrong_size), DimensionError);
  auto cs = make_nbody_model(ModelKind::calogero_sutherland, 2, 1.0);
  const std::vector<double> wrap{0.0, pi};
  CHECK_THROWS_AS(cs.prepotential(wrap), SingularConfiguration);
}

TEST_CASE("prepotential examples") {
  auto c = make_nbody_model(ModelKind::calogero, 2, 1.0);
  const std::vector<double> x{0.0, 1.0};
  auto w = c.prepotential(x);
  CHECK(w[0] == doctest::Approx(1.0));
  CHECK(w[1] == doctest::Approx(-1.0));

  auto cs = make_nbody_model(ModelKind::calogero_sutherland, 3, 1.0);
  const std::vector<double> eq{0.0, 2 * pi / 3, 4 * pi / 3};
  auto we = cs.prepotential(eq);
  for (int i = 0; i < 3; ++i) CHECK(std::abs(we[i]) < 1e-14);

  auto hc = make_nbody_model(ModelKind::harmonic_calogero, 2, 1.0, 1.0);
  auto wh = hc.prepotential(x);
  CHECK(wh[0] == doctest::Approx(1.0 - hc.beta()));
  CHECK(wh[1] == doctest::Approx(-1.0 + hc.beta()));
}

TEST_CASE("n-body invariants: zero sum, curl-free, derivative matches differences") {
  Rng rng(5);
  for (auto kind : {ModelKind::calogero, ModelKind::harmonic_calogero, ModelKind::calogero_sutherland}) {
    for (int n = 2; n <= 6; ++n) {
      std::optional<double> omega;
      if (kind == ModelKind::harmonic_calogero) omega = 1.3;
      auto m = make_nbody_model(kind, n, 1.7, omega);
      for (int t = 0; t < 20; ++t) {
        std::vector<double> x(n);
        do {
          for (auto& v : x) v = rng.uniform(0.0, 3.0);
        } while (m.min_separation(x) < 0.05);
        auto f = m.field(x);
        const double wmax = f.w.cwiseAbs().maxCoeff();
        CHECK(std::abs(f.w.sum()) < 1e-12 * std::max(1.0, wmax));
        CHECK((f.dw - f.dw.transpose()).cwiseAbs().maxCoeff() == 0.0);
        for (int j = 0; j < n; ++j) {
          auto xp = x, xm = x;
          const double h = 1e-6;
          xp[j] += h;
          xm[j] -= h;
          Eigen::VectorXd col = (m.prepotential(xp) - m.prepotential(xm)) / (2 * h);
          for (int i = 0; i < n; ++i)
            CHECK(col[i] == doctest::Approx(f.dw(i, j)).epsilon(1e-5).scale(1.0));
        }
        // Factorized potentials against W^2 -/+ trace(dW) from the field.
        CHECK(m.partner_potential(x) - m.factorized_potential(x) ==
              doctest::Approx(2 * f.dw.trace()).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("jastrow log has gradient -W") {
  Rng rng(9);
  for (auto kind : {ModelKind::calogero, ModelKind::harmonic_calogero, ModelKind::calogero_sutherland}) {
    std::optional<double> omega;
    if (kind == ModelKind::harmonic_calogero) omega = 0.9;
    auto m = make_nbody_model(kind, 4, 1.5, omega);
    std::vector<double> x{0.2, 0.9, 1.7, 2.6};
    auto w = m.prepotential(x);
    for (int j = 0; j < 4; ++j) {
      auto xp = x, xm = x;
      xp[j] += 1e-6;
      xm[j] -= 1e-6;
      const double g = (m.jastrow_log(xp) - m.jastrow_log(xm)) / 2e-6;
      CHECK(g == doctest::Approx(-w[j]).epsilon(1e-6));
    }
  }
}

TEST_CASE("config round trip and unknown keys") {
  ModelSpec s;
  s.kind = ModelKind::harmonic_calogero;
  s.n = 3;
  s.alpha = 1.25;
  s.omega = 0.7;
  s.beta_override = 0.1;
  std::map<std::string, std::string> kv{{"kind", "harmonic_calogero"}, {"N", "3"}, {"alpha", "1.25"},
                                        {"omega", "0.7"}, {"beta_override", "0.1"}};
  auto back = model_spec_from_config(kv);
  CHECK(to_config(back) == to_config(s));
  kv["colour"] = "red";
  CHECK_THROWS_AS(model_spec_from_config(kv), ConfigError);
  CHECK_THROWS_AS(model_spec_from_config({{"N", "2.5"}}), ConfigError);
  CHECK_THROWS_AS(model_spec_from_config({{"alpha", "abc"}}), ConfigError);
}

TEST_CASE("pair rows: v0 = W^2 - W'") {
  const std::vector<PairPrepotential> rows{
      PairPrepotential(PairRow::rational_harmonic, 0.7, 1.3), PairPrepotential(PairRow::sign, 1.2),
      PairPrepotential(PairRow::cot, 1.5), PairPrepotential(PairRow::coth, 0.8)};
  Rng rng(3);
  for (const auto& p : rows) {
    for (int t = 0; t < 100; ++t) {
      const double x = rng.uniform(0.1, 3.0);
      const double w = p.W(x);
      CHECK(std::abs(p.v0(x) - (w * w - p.dW(x))) < 1e-12 * std::max(1.0, std::abs(p.v0(x))));
      CHECK(p.W(-x) == doctest::Approx(-p.W(x)));
      // psi0 = exp(-int W): (log psi0)' = -W
      const double dl = fd([&](double s) { return std::log(p.psi0(s)); }, x, 1e-6);
      CHECK(dl == doctest::Approx(-w).epsilon(1e-6));
    }
  }
}

TEST_CASE("pair functional equation") {
  PairPrepotential cot(PairRow::cot, 1.0);
  CHECK(pair_condition_residual(cot, 0.4, 0.7) < 1e-10);
  PairPrepotential rat(PairRow::rational_harmonic, 0.9, 1.4);
  CHECK(pair_condition_residual(rat, 0.3, -1.1) < 1e-10);

  const double a = 1.3;
  PairPrepotential cota(PairRow::cot, a);
  CHECK(pair_condition_residual(cota, 0.4, 0.7, [](double) { return 0.0; }) ==
        doctest::Approx(a * a).epsilon(1e-12));

  for (auto row : {PairRow::rational_harmonic, PairRow::sign, PairRow::cot, PairRow::coth}) {
    PairPrepotential p(row, 1.1, 0.6);
    auto st = check_pair_condition(p, 1000, 42);
    CHECK(st.samples == 1000);
    CHECK(st.max_residual < 1e-10);
    CHECK(st.mean_residual <= st.max_residual);
  }
}

TEST_CASE("rejected vtilde forms: -a^2/3 fails for coth and sgn, b(b+1) fails for rational v0") {
  const double a = 0.9;
  auto third = [a](double) { return -a * a / 3.0; };
  for (auto row : {PairRow::coth, PairRow::sign}) {
    PairPrepotential p(row, a);
    // The mismatch is the constant 2 a^2.
    CHECK(pair_condition_residual(p, 0.4, 0.7, third) == doctest::Approx(2 * a * a).epsilon(1e-12));
  }
  PairPrepotential cot(PairRow::cot, a);
  CHECK(pair_condition_residual(cot, 0.4, 0.7, third) < 1e-12);

  const double b = 1.4;
  PairPrepotential rat(PairRow::rational_harmonic, a, b);
  const double x = 0.8;
  const double alt_v0 = b * (b + 1) / (x * x) + a * a * x * x + 2 * b * a + a;
  const double w = rat.W(x);
  CHECK(std::abs(alt_v0 - (w * w - rat.dW(x))) > 1.0);
}

TEST_CASE("pair sampling is deterministic") {
  PairPrepotential p(PairRow::cot, 2.0);
  auto s1 = check_pair_condition(p, 200, 77);
  auto s2 = check_pair_condition(p, 200, 77);
  CHECK(s1.max_residual == s2.max_residual);
  CHECK(s1.mean_residual == s2.mean_residual);
}
