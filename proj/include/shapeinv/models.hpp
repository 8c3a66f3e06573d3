#pragma once

// Prepotential families: one-dimensional shape-invariant families, the
// N-body Calogero-type models, and the two-body rows that admit a product
// ground state.
//
// Convention throughout: A = d/dx + W, A^dagger = -d/dx + W, so that
// A^dagger A = -d^2 + W^2 - W' and the zero mode of A is exp(-int W).
// Units: hbar = 1, 2m = 1.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace shapeinv {

inline constexpr double kDefaultEpsilonSing = 1e-6;

// ---------------------------------------------------------------------------
// One-dimensional families

enum class Family1D { rosen_morse_trig, rational_harmonic, sign, coth_hyperbolic };

std::string to_string(Family1D family);
Family1D family_from_string(const std::string& name);

struct Interval {
  double lo;
  double hi;
};

// Energy shift produced by one step of the parameter map. `degenerate` marks
// parameter points where the map does not move (a = 0) or the family has no
// ladder (sign).
struct Remainder {
  double value = 0.0;
  bool degenerate = false;
};

// Parameter layout per family:
//   rosen_morse_trig   (b, a)  W = -b cot(a x)      on (0, pi/a)
//   rational_harmonic  (a, b)  W = a x + b / x      on (0, inf)
//   sign               (a)     W = a sgn(x)         on R \ {0}
//   coth_hyperbolic    (b, a)  W = -b coth(a x)     on (0, inf)
class Prepotential1D {
 public:
  Prepotential1D(Family1D family, std::vector<double> params);

  Family1D family() const { return family_; }
  std::span<const double> params() const { return params_; }
  double param(std::size_t i) const { return params_.at(i); }

  double W(double x) const;
  double dW(double x) const;
  // -d^2 + potential(x) is A^dagger A; -d^2 + partner_potential(x) is A A^dagger.
  double potential(double x) const { return W(x) * W(x) - dW(x); }
  double partner_potential(double x) const { return W(x) * W(x) + dW(x); }

  std::vector<double> next_params() const;
  Prepotential1D next() const { return {family_, next_params()}; }
  // R(f(params)): partner_potential = next().potential + remainder_next().
  Remainder remainder_next() const;

  Interval natural_domain() const;
  // exp(-int W), unnormalized, closed form per family.
  double ground_state(double x) const;
  // Boundary exponent of the ground state; <= 1/2 means A psi0 is not square
  // integrable near the singular end (infinite kinetic energy).
  bool ground_state_normalizable() const;
  // Whether algebraic energies form a bound, non-decreasing ladder.
  bool has_bound_ladder() const;

  std::string describe() const;

 private:
  Family1D family_;
  std::vector<double> params_;
};

Prepotential1D make_prepotential_1d(Family1D family, std::vector<double> params);

// R evaluated at already-shifted parameters params_next = f(params).
Remainder remainder_1d(Family1D family, std::span<const double> params_next);
Remainder remainder_1d(const Prepotential1D& prep, std::span<const double> params_next);

// ---------------------------------------------------------------------------
// N-body models

enum class ModelKind { calogero, harmonic_calogero, calogero_sutherland };

std::string to_string(ModelKind kind);
// Accepts "calogero", "harmonic", "harmonic_calogero", "hc", "cs",
// "calogero_sutherland", "sutherland".
ModelKind kind_from_string(const std::string& name);

struct ModelSpec {
  ModelKind kind = ModelKind::calogero;
  int n = 2;
  double alpha = 1.0;
  std::optional<double> omega;
  std::optional<double> beta_override;
  double epsilon_sing = kDefaultEpsilonSing;
};

// W_i and the symmetric Jacobian d_j W_i at one configuration.
struct PrepotentialField {
  Eigen::VectorXd w;
  Eigen::MatrixXd dw;  // dw(i, j) = d W_i / d x_j
};

class NBodyModel {
 public:
  explicit NBodyModel(const ModelSpec& spec);

  const ModelSpec& spec() const { return spec_; }
  ModelKind kind() const { return spec_.kind; }
  int n() const { return spec_.n; }
  double alpha() const { return spec_.alpha; }
  double omega() const { return spec_.omega.value_or(0.0); }
  double beta() const { return beta_; }
  double g() const { return 2.0 * spec_.alpha * (spec_.alpha - 1.0); }
  double epsilon_sing() const { return spec_.epsilon_sing; }
  bool periodic() const { return spec_.kind == ModelKind::calogero_sutherland; }

  // Additive constant of the Hamiltonian as written for each kind.
  double c() const;
  // Coefficient of sum_i sum'_j (x_i - x_j)^2 in the written harmonic
  // Hamiltonian (omega^2 / 4); zero for other kinds.
  double quadratic_coupling() const;
  // Shape-invariance remainder R(alpha + 1) in closed form. Empty for the
  // harmonic kind, whose remainder is measured rather than assumed.
  std::optional<double> remainder() const;
  // The closed form quoted for the harmonic remainder,
  // (omega / sqrt 2) sqrt(N) (N - 1) N; kept for side-by-side reporting.
  double harmonic_remainder_reference() const;

  NBodyModel with_alpha(double alpha) const;
  NBodyModel shifted() const { return with_alpha(spec_.alpha + 1.0); }

  // Smallest pair separation; for the periodic kind the distance to the
  // nearest multiple of pi.
  double min_separation(std::span<const double> x) const;
  void check_configuration(std::span<const double> x) const;

  Eigen::VectorXd prepotential(std::span<const double> x) const;
  PrepotentialField field(std::span<const double> x) const;

  // Singular pair part sum_i sum'_j (g/2) u(x_i - x_j), u = 1/d^2 or 1/sin^2 d.
  double singular_pair_potential(std::span<const double> x) const;
  // sum_i sum'_j (x_i - x_j)^2
  double quadratic_pair_sum(std::span<const double> x) const;
  // Full potential of the Hamiltonian as written, constant included.
  double potential(std::span<const double> x) const;
  // sum W_i^2 -/+ sum d_i W_i: the potentials of sum A^dagger A and sum A A^dagger.
  double factorized_potential(std::span<const double> x) const;
  double partner_potential(std::span<const double> x) const;

  // log of the product ground state annihilated by every A_i.
  double jastrow_log(std::span<const double> x) const;

  std::string describe() const;

 private:
  ModelSpec spec_;
  double beta_ = 0.0;
};

NBodyModel make_nbody_model(ModelKind kind, int n, double alpha,
                            std::optional<double> omega = std::nullopt,
                            std::optional<double> beta_override = std::nullopt);

// Plain-text key = value serialization. Keys: kind, N, alpha, omega,
// beta_override, epsilon_sing.
std::string to_config(const ModelSpec& spec);
ModelSpec model_spec_from_config(const std::map<std::string, std::string>& kv);

// ---------------------------------------------------------------------------
// Two-body rows with a product ground state

enum class PairRow { rational_harmonic, sign, cot, coth };

std::string to_string(PairRow row);

// W follows the A = d + W convention, so psi0 = exp(-int W) and
// v0 = W^2 - W'. The functional equation
//   -W(A)W(C) - W(A)W(B) - W(C)W(B) = vt(A) + vt(B) + vt(C),  A + B + C = 0
// is what removes genuine three-body terms from sum_i W_i^2.
class PairPrepotential {
 public:
  // a, b: row parameters (b only used by rational_harmonic).
  PairPrepotential(PairRow row, double a, double b = 0.0);

  PairRow row() const { return row_; }
  double a() const { return a_; }
  double b() const { return b_; }

  double W(double x) const;
  double dW(double x) const;
  // For the sign row this is the regular part only; the a delta(x) spike is
  // carried symbolically by has_delta_term().
  double v0(double x) const;
  double vtilde(double x) const;
  double psi0(double x) const;
  bool has_delta_term() const { return row_ == PairRow::sign; }
  // Points where W is singular (multiples of pi for cot, zero otherwise).
  double distance_to_singularity(double x) const;

 private:
  PairRow row_;
  double a_;
  double b_;
};

struct PairConditionStats {
  double max_residual = 0.0;
  double mean_residual = 0.0;
  int samples = 0;
  int resampled = 0;
};

// Absolute residual of the functional equation at (A, B), C = -A - B.
double pair_condition_residual(const PairPrepotential& pair, double A, double B);
double pair_condition_residual(const PairPrepotential& pair, double A, double B,
                               const std::function<double(double)>& vtilde);

// Sampled residuals, each relative to max(1, sum of |W W| products).
PairConditionStats check_pair_condition(const PairPrepotential& pair, int samples,
                                        std::uint64_t seed,
                                        double epsilon_sing = kDefaultEpsilonSing);
PairConditionStats check_pair_condition(const PairPrepotential& pair, int samples,
                                        std::uint64_t seed, double epsilon_sing,
                                        const std::function<double(double)>& vtilde);

}  // namespace shapeinv
