#pragma once

// Exact second-order jets and the action of the ladder operators on them.
//
// A Jet2 carries value, gradient and Hessian of a test function at one point.
// One ladder operator turns it into a Jet1 (value and gradient); a second one
// leaves a plain value. Products of more than two operators are not evaluated
// here.

#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "shapeinv/models.hpp"
#include "shapeinv/random.hpp"

namespace shapeinv {

struct Jet2 {
  double value = 0.0;
  Eigen::VectorXd grad;
  Eigen::MatrixXd hess;

  static Jet2 zero(int n) { return {0.0, Eigen::VectorXd::Zero(n), Eigen::MatrixXd::Zero(n, n)}; }
  double laplacian() const { return hess.trace(); }
};

struct Jet1 {
  double value = 0.0;
  Eigen::VectorXd grad;
};

Jet2 operator+(const Jet2& a, const Jet2& b);
Jet2 operator*(const Jet2& a, const Jet2& b);
Jet2 operator*(double s, const Jet2& a);
// g(f) for a scalar function g given with its first two derivatives at f.value.
Jet2 compose(const Jet2& f, double g, double dg, double d2g);

// A point-evaluable scalar field of N variables with exact 2-jets.
class TestFunction {
 public:
  using Evaluator = std::function<Jet2(std::span<const double>)>;

  TestFunction(int n, Evaluator eval) : n_(n), eval_(std::move(eval)) {}

  int n() const { return n_; }
  int max_order() const { return 2; }
  Jet2 operator()(std::span<const double> x) const;
  double value(std::span<const double> x) const { return (*this)(x).value; }

 private:
  int n_;
  Evaluator eval_;
};

namespace tf {
TestFunction constant(int n, double c);
TestFunction coordinate(int n, int i);
TestFunction sum(const TestFunction& a, const TestFunction& b);
TestFunction product(const TestFunction& a, const TestFunction& b);
TestFunction scaled(double s, const TestFunction& a);
TestFunction exp(const TestFunction& a);
TestFunction sin(const TestFunction& a);
TestFunction cos(const TestFunction& a);
// exp(-|x - mu|^2 / (2 sigma^2))
TestFunction gaussian(std::vector<double> mu, double sigma);
// exp(jastrow_log): the product ground state of `model`.
TestFunction jastrow(const NBodyModel& model);
}  // namespace tf

// Gaussian envelope times a random polynomial of degree <= 3 for the
// open-line kinds, a short random sum of products of sin/cos for the
// periodic kind.
TestFunction random_test_function(const NBodyModel& model, Rng& rng);

// Uniform draw from [-2, 2]^N (open-line kinds) or from the ordered sector of
// (0, pi)^N (periodic kind), rejecting any pair closer than min_gap.
std::vector<double> sample_configuration(const NBodyModel& model, Rng& rng, double min_gap = 0.05);

// max(1, |f|, max|grad f|, |laplacian f|, max|hess f|, |V|)
double residual_scale(const NBodyModel& model, const Jet2& f, std::span<const double> x);

// ---------------------------------------------------------------------------
// Operators

// annihilate: A_i = d_i + W_i      create: A_i^dagger = -d_i + W_i
// jacobi: B_a = sum_i O_ai A_i      jacobi_dagger: B_a^dagger
// momentum: sum_i d_i (the coefficient of -i in P_TOT on functions)
enum class OpKind { annihilate, create, jacobi, jacobi_dagger, momentum };

struct Op {
  OpKind kind;
  int index = 0;  // 0-based particle or Jacobi index; unused for momentum
};

inline Op annihilate(int i) { return {OpKind::annihilate, i}; }
inline Op create(int i) { return {OpKind::create, i}; }
inline Op jacobi(int a) { return {OpKind::jacobi, a}; }
inline Op jacobi_dagger(int a) { return {OpKind::jacobi_dagger, a}; }
inline Op momentum() { return {OpKind::momentum, 0}; }

Jet1 apply(const NBodyModel& model, Op op, const Jet2& f, std::span<const double> x);
double apply(const NBodyModel& model, Op op, const Jet1& f, std::span<const double> x);
Jet1 apply(const NBodyModel& model, Op op, const Jet2& f, const PrepotentialField& field);
double apply(const NBodyModel& model, Op op, const Jet1& f, const PrepotentialField& field);

// Operator product ops[0] ops[1] ... applied right to left. Throws
// JetOrderError for more than two operators.
double apply_chain(const NBodyModel& model, std::span<const Op> ops, const TestFunction& f,
                   std::span<const double> x);

Jet1 apply_annihilator(const NBodyModel& model, int i, const TestFunction& f, std::span<const double> x);
Jet1 apply_creator(const NBodyModel& model, int i, const TestFunction& f, std::span<const double> x);
Jet1 jacobi_action(const NBodyModel& model, int a, const TestFunction& f, std::span<const double> x);

// -laplacian f + V f with V the Hamiltonian as written (constant included).
double apply_hamiltonian_direct(const NBodyModel& model, const TestFunction& f, std::span<const double> x);
double apply_hamiltonian_direct(const NBodyModel& model, const Jet2& f, std::span<const double> x);
// sum_i A_i^dagger A_i f, evaluated as two operator applications.
double apply_hamiltonian_factorized(const NBodyModel& model, const TestFunction& f,
                                    std::span<const double> x);
double apply_hamiltonian_factorized(const NBodyModel& model, const Jet2& f, std::span<const double> x);
// sum_i A_i A_i^dagger f
double apply_partner(const NBodyModel& model, const TestFunction& f, std::span<const double> x);
double apply_partner(const NBodyModel& model, const Jet2& f, std::span<const double> x);
// sum_a B_a^dagger B_a f
double apply_jacobi_hamiltonian(const NBodyModel& model, const Jet2& f, std::span<const double> x);
// Real coefficient c in (P_TOT f)(x) = -i c, computed as sum_i (A_i f)(x).
double total_momentum(const NBodyModel& model, const TestFunction& f, std::span<const double> x);

// [op1, op2] f = op1 (op2 f) - op2 (op1 f)
double commutator(const NBodyModel& model, Op op1, Op op2, const Jet2& f, std::span<const double> x);

// Rows: (1, -1, 0, ...)/sqrt 2, (1, 1, -2, 0, ...)/sqrt 6, ..., last (1, ..., 1)/sqrt N.
Eigen::MatrixXd jacobi_matrix(int n);

}  // namespace shapeinv
