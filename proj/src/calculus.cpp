#include "shapeinv/calculus.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "shapeinv/errors.hpp"

namespace shapeinv {

Jet2 operator+(const Jet2& a, const Jet2& b) { return {a.value + b.value, a.grad + b.grad, a.hess + b.hess}; }

Jet2 operator*(const Jet2& a, const Jet2& b) {
  Jet2 r;
  r.value = a.value * b.value;
  r.grad = a.value * b.grad + b.value * a.grad;
  r.hess = a.value * b.hess + b.value * a.hess + a.grad * b.grad.transpose() + b.grad * a.grad.transpose();
  return r;
}

Jet2 operator*(double s, const Jet2& a) { return {s * a.value, s * a.grad, s * a.hess}; }

Jet2 compose(const Jet2& f, double g, double dg, double d2g) {
  return {g, dg * f.grad, dg * f.hess + d2g * f.grad * f.grad.transpose()};
}

Jet2 TestFunction::operator()(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != n_)
    throw DimensionError("test function of " + std::to_string(n_) + " variables evaluated at " +
                         std::to_string(x.size()) + " coordinates");
  Jet2 j = eval_(x);
  j.hess = 0.5 * (j.hess + j.hess.transpose()).eval();
  return j;
}

namespace tf {

TestFunction constant(int n, double c) {
  return {n, [n, c](std::span<const double>) {
            Jet2 j = Jet2::zero(n);
            j.value = c;
            return j;
          }};
}

TestFunction coordinate(int n, int i) {
  if (i < 0 || i >= n) throw DimensionError("coordinate index out of range");
  return {n, [n, i](std::span<const double> x) {
            Jet2 j = Jet2::zero(n);
            j.value = x[i];
            j.grad[i] = 1.0;
            return j;
          }};
}

TestFunction sum(const TestFunction& a, const TestFunction& b) {
  return {a.n(), [a, b](std::span<const double> x) { return a(x) + b(x); }};
}

TestFunction product(const TestFunction& a, const TestFunction& b) {
  return {a.n(), [a, b](std::span<const double> x) { return a(x) * b(x); }};
}

TestFunction scaled(double s, const TestFunction& a) {
  return {a.n(), [s, a](std::span<const double> x) { return s * a(x); }};
}

TestFunction exp(const TestFunction& a) {
  return {a.n(), [a](std::span<const double> x) {
            const Jet2 f = a(x);
            const double e = std::exp(f.value);
            return compose(f, e, e, e);
          }};
}

TestFunction sin(const TestFunction& a) {
  return {a.n(), [a](std::span<const double> x) {
            const Jet2 f = a(x);
            const double s = std::sin(f.value), c = std::cos(f.value);
            return compose(f, s, c, -s);
          }};
}

TestFunction cos(const TestFunction& a) {
  return {a.n(), [a](std::span<const double> x) {
            const Jet2 f = a(x);
            const double s = std::sin(f.value), c = std::cos(f.value);
            return compose(f, c, -s, -c);
          }};
}

TestFunction gaussian(std::vector<double> mu, double sigma) {
  const int n = static_cast<int>(mu.size());
  const double inv = 1.0 / (sigma * sigma);
  return {n, [n, mu = std::move(mu), inv](std::span<const double> x) {
            Eigen::VectorXd d(n);
            for (int i = 0; i < n; ++i) d[i] = x[i] - mu[i];
            const double e = std::exp(-0.5 * inv * d.squaredNorm());
            Jet2 j;
            j.value = e;
            j.grad = -inv * e * d;
            j.hess = e * (inv * inv * d * d.transpose() - inv * Eigen::MatrixXd::Identity(n, n));
            return j;
          }};
}

// log Phi has gradient -W and Hessian -dW, so Phi's jet follows directly.
TestFunction jastrow(const NBodyModel& model) {
  return {model.n(), [model](std::span<const double> x) {
            const PrepotentialField f = model.field(x);
            const double phi = std::exp(model.jastrow_log(x));
            Jet2 j;
            j.value = phi;
            j.grad = -phi * f.w;
            j.hess = phi * (f.w * f.w.transpose() - f.dw);
            return j;
          }};
}

}  // namespace tf

TestFunction random_test_function(const NBodyModel& model, Rng& rng) {
  const int n = model.n();
  if (model.periodic()) {
    TestFunction f = tf::constant(n, rng.normal());
    const int terms = 3;
    for (int t = 0; t < terms; ++t) {
      TestFunction term = tf::constant(n, rng.normal());
      for (int i = 0; i < n; ++i) {
        const int m = rng.uniform_int(0, 2);
        if (m == 0) continue;
        const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
        TestFunction arg = tf::sum(tf::scaled(m, tf::coordinate(n, i)), tf::constant(n, phase));
        term = tf::product(term, tf::cos(arg));
      }
      f = tf::sum(f, term);
    }
    return f;
  }
  std::vector<double> mu(n);
  for (auto& m : mu) m = rng.uniform(-1.0, 1.0);
  const double sigma = rng.uniform(0.7, 1.5);
  // Polynomial in y = x - mu with normal coefficients, one random monomial of
  // each degree per coordinate plus a constant.
  TestFunction poly = tf::constant(n, rng.normal());
  for (int i = 0; i < n; ++i) {
    TestFunction yi = tf::sum(tf::coordinate(n, i), tf::constant(n, -mu[i]));
    poly = tf::sum(poly, tf::scaled(rng.normal(), yi));
    const int j = rng.uniform_int(0, n - 1);
    TestFunction yj = tf::sum(tf::coordinate(n, j), tf::constant(n, -mu[j]));
    TestFunction quad = tf::product(yi, yj);
    poly = tf::sum(poly, tf::scaled(rng.normal(), quad));
    const int k = rng.uniform_int(0, n - 1);
    TestFunction yk = tf::sum(tf::coordinate(n, k), tf::constant(n, -mu[k]));
    poly = tf::sum(poly, tf::scaled(rng.normal(), tf::product(quad, yk)));
  }
  return tf::product(poly, tf::gaussian(std::move(mu), sigma));
}

std::vector<double> sample_configuration(const NBodyModel& model, Rng& rng, double min_gap) {
  const int n = model.n();
  const double gap = std::max(min_gap, model.epsilon_sing());
  std::vector<double> x(n);
  for (int attempt = 0; attempt < 100000; ++attempt) {
    if (model.periodic()) {
      for (auto& v : x) v = rng.uniform(0.0, std::numbers::pi);
      std::sort(x.begin(), x.end());
    } else {
      for (auto& v : x) v = rng.uniform(-2.0, 2.0);
    }
    if (model.min_separation(x) >= gap) return x;
  }
  throw ConfigError("sample_configuration: rejection threshold too large for N");
}

double residual_scale(const NBodyModel& model, const Jet2& f, std::span<const double> x) {
  return std::max({1.0, std::abs(f.value), f.grad.cwiseAbs().maxCoeff(), std::abs(f.laplacian()),
                   f.hess.cwiseAbs().maxCoeff(), std::abs(model.potential(x))});
}

Eigen::MatrixXd jacobi_matrix(int n) {
  if (n < 1) throw DimensionError("jacobi_matrix: n must be >= 1");
  Eigen::MatrixXd o = Eigen::MatrixXd::Zero(n, n);
  for (int a = 1; a < n; ++a) {
    const double norm = 1.0 / std::sqrt(static_cast<double>(a) * (a + 1));
    for (int i = 0; i < a; ++i) o(a - 1, i) = norm;
    o(a - 1, a) = -a * norm;
  }
  o.row(n - 1).setConstant(1.0 / std::sqrt(static_cast<double>(n)));
  return o;
}

namespace {

void check_index(const NBodyModel& model, Op op) {
  if (op.kind != OpKind::momentum && (op.index < 0 || op.index >= model.n()))
    throw DimensionError("operator index " + std::to_string(op.index) + " out of range for N = " +
                         std::to_string(model.n()));
}

// Coefficients c_i and sign s with op = sum_i c_i (s d_i + W_i); for momentum
// the W part is dropped.
struct Linear {
  Eigen::VectorXd c;
  double sign;
  bool with_w;
};

Linear linear_form(const NBodyModel& model, Op op) {
  check_index(model, op);
  const int n = model.n();
  Linear l{Eigen::VectorXd::Zero(n), 1.0, true};
  switch (op.kind) {
    case OpKind::annihilate: l.c[op.index] = 1.0; break;
    case OpKind::create: l.c[op.index] = 1.0; l.sign = -1.0; break;
    case OpKind::jacobi: l.c = jacobi_matrix(n).row(op.index).transpose(); break;
    case OpKind::jacobi_dagger:
      l.c = jacobi_matrix(n).row(op.index).transpose();
      l.sign = -1.0;
      break;
    case OpKind::momentum: l.c.setOnes(); l.with_w = false; break;
  }
  return l;
}

}  // namespace

Jet1 apply(const NBodyModel& model, Op op, const Jet2& f, const PrepotentialField& field) {
  const Linear l = linear_form(model, op);
  const double w = l.with_w ? l.c.dot(field.w) : 0.0;
  Jet1 r;
  r.value = l.sign * l.c.dot(f.grad) + w * f.value;
  r.grad = l.sign * (f.hess * l.c) + w * f.grad;
  if (l.with_w) r.grad += (field.dw.transpose() * l.c) * f.value;
  return r;
}

double apply(const NBodyModel& model, Op op, const Jet1& f, const PrepotentialField& field) {
  const Linear l = linear_form(model, op);
  const double w = l.with_w ? l.c.dot(field.w) : 0.0;
  return l.sign * l.c.dot(f.grad) + w * f.value;
}

Jet1 apply(const NBodyModel& model, Op op, const Jet2& f, std::span<const double> x) {
  return apply(model, op, f, model.field(x));
}

double apply(const NBodyModel& model, Op op, const Jet1& f, std::span<const double> x) {
  return apply(model, op, f, model.field(x));
}

double apply_chain(const NBodyModel& model, std::span<const Op> ops, const TestFunction& f,
                   std::span<const double> x) {
  if (ops.size() > 2)
    throw JetOrderError("operator chain of length " + std::to_string(ops.size()) +
                        " exceeds the jet order 2");
  const Jet2 j = f(x);
  if (ops.empty()) return j.value;
  const PrepotentialField field = model.field(x);
  const Jet1 first = apply(model, ops.back(), j, field);
  if (ops.size() == 1) return first.value;
  return apply(model, ops.front(), first, field);
}

Jet1 apply_annihilator(const NBodyModel& model, int i, const TestFunction& f, std::span<const double> x) {
  return apply(model, annihilate(i), f(x), x);
}

Jet1 apply_creator(const NBodyModel& model, int i, const TestFunction& f, std::span<const double> x) {
  return apply(model, create(i), f(x), x);
}

Jet1 jacobi_action(const NBodyModel& model, int a, const TestFunction& f, std::span<const double> x) {
  return apply(model, jacobi(a), f(x), x);
}

double apply_hamiltonian_direct(const NBodyModel& model, const Jet2& f, std::span<const double> x) {
  return -f.laplacian() + model.potential(x) * f.value;
}

double apply_hamiltonian_direct(const NBodyModel& model, const TestFunction& f, std::span<const double> x) {
  return apply_hamiltonian_direct(model, f(x), x);
}

double apply_hamiltonian_factorized(const NBodyModel& model, const Jet2& f, std::span<const double> x) {
  const PrepotentialField field = model.field(x);
  double s = 0.0;
  for (int i = 0; i < model.n(); ++i)
    s += apply(model, create(i), apply(model, annihilate(i), f, field), field);
  return s;
}

double apply_hamiltonian_factorized(const NBodyModel& model, const TestFunction& f,
                                    std::span<const double> x) {
  return apply_hamiltonian_factorized(model, f(x), x);
}

double apply_partner(const NBodyModel& model, const Jet2& f, std::span<const double> x) {
  const PrepotentialField field = model.field(x);
  double s = 0.0;
  for (int i = 0; i < model.n(); ++i)
    s += apply(model, annihilate(i), apply(model, create(i), f, field), field);
  return s;
}

double apply_partner(const NBodyModel& model, const TestFunction& f, std::span<const double> x) {
  return apply_partner(model, f(x), x);
}

double apply_jacobi_hamiltonian(const NBodyModel& model, const Jet2& f, std::span<const double> x) {
  const PrepotentialField field = model.field(x);
  double s = 0.0;
  for (int a = 0; a < model.n(); ++a)
    s += apply(model, jacobi_dagger(a), apply(model, jacobi(a), f, field), field);
  return s;
}

double total_momentum(const NBodyModel& model, const TestFunction& f, std::span<const double> x) {
  const Jet2 j = f(x);
  const PrepotentialField field = model.field(x);
  double s = 0.0;
  for (int i = 0; i < model.n(); ++i) s += apply(model, annihilate(i), j, field).value;
  return s;
}

double commutator(const NBodyModel& model, Op op1, Op op2, const Jet2& f, std::span<const double> x) {
  const PrepotentialField field = model.field(x);
  return apply(model, op1, apply(model, op2, f, field), field) -
         apply(model, op2, apply(model, op1, f, field), field);
}

}  // namespace shapeinv
