#pragma once

// Seeded residual checks of the operator identities. Every function here is
// deterministic in (model, options); trial t draws from sub_seed(seed, t).

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "shapeinv/models.hpp"

namespace shapeinv {

struct VerifyOptions {
  int trials = 100;
  std::uint64_t seed = 0;
  // Rejection threshold on pair separations when sampling configurations.
  double min_gap = 0.05;
  double tol_identity = 1e-8;     // factorization, shape invariance, jastrow, fits
  double tol_structural = 1e-10;  // commutators, momentum
  double tol_exact = 1e-12;       // three-body identities, sum W, curl, Jacobi
};

struct WorstSample {
  std::vector<double> x;
  double residual = 0.0;
};

struct ResidualReport {
  std::string identity;
  std::string model;
  std::uint64_t seed = 0;
  int trials = 0;
  double max_residual = 0.0;
  double mean_residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  WorstSample worst;
  // Identity-specific numbers (predicted R, fitted constants, ...).
  std::map<std::string, double> details;
  std::map<std::string, std::string> notes;
};

nlohmann::json to_json(const ResidualReport& r);

// Running max/mean with worst-sample tracking.
class ResidualAccumulator {
 public:
  void add(double residual, const std::vector<double>& x);
  ResidualReport finish(std::string identity, const std::string& model, const VerifyOptions& opt,
                        double tolerance) const;
  int count() const { return count_; }

 private:
  double max_ = 0.0;
  double sum_ = 0.0;
  int count_ = 0;
  WorstSample worst_;
};

// |H_direct f - sum A^dagger A f| / scale. For the harmonic kind the direct
// side uses the fitted quadratic coefficient and constant (see
// constant_fit_diagnostic); the reference ones are recorded in the details.
ResidualReport factorization_residual(const NBodyModel& model, const VerifyOptions& opt = {});

// |sum A A^dagger(alpha) f - sum A^dagger A(alpha+1) f - R f| / scale.
ResidualReport shape_invariance_residual(const NBodyModel& model, const VerifyOptions& opt = {});

// [A_i, A_j] = [A_i^dagger, A_j^dagger] = 0 and [A_i^dagger, A_j] against the
// explicit case formulas, over all i, j.
ResidualReport commutator_check(const NBodyModel& model, const VerifyOptions& opt = {});

// [P, A_i] f and [P, A_i^dagger] f with P = sum_k d_k.
ResidualReport momentum_commutation(const NBodyModel& model, const VerifyOptions& opt = {});

// sum_i W_i = 0 and d_i W_j = d_j W_i at sampled configurations.
ResidualReport prepotential_invariants(const NBodyModel& model, const VerifyOptions& opt = {});

// sum_a B_a^dagger B_a f against sum_i A_i^dagger A_i f, plus [B_N, B_a^dagger] f
// against the momentum term it reduces to.
ResidualReport jacobi_equivalence(const NBodyModel& model, const VerifyOptions& opt = {});

// H Phi0 / scale for the product ground state, using exact jets. The harmonic
// kind is checked against sum A^dagger A.
ResidualReport jastrow_residual(const NBodyModel& model, const VerifyOptions& opt = {});

enum class ThreeBodyKind { rational, trigonometric };

ThreeBodyKind three_body_kind(ModelKind kind);

struct ThreeBodyResult {
  double absolute = 0.0;
  // absolute / max(1, sum of |terms|)
  double relative = 0.0;
  // sum of |terms| / max(1, |exact value|); large means heavy cancellation.
  double condition = 0.0;
};

// rational: sum of 1/((x_i - x_j)(x_i - x_k)) over the three cyclic terms (= 0)
// trigonometric: cot a cot b + cot b cot c + cot c cot a - 1, with
// a = x_i - x_j, b = x_j - x_k, c = x_k - x_i.
ThreeBodyResult three_body_cancellation(ThreeBodyKind kind, double xi, double xj, double xk,
                                        double epsilon_sing = kDefaultEpsilonSing);

// Sampled version; residuals are the relative ones.
ResidualReport three_body_report(ThreeBodyKind kind, const VerifyOptions& opt = {});

struct ConstantFit {
  std::string model;
  int samples = 0;
  std::uint64_t seed = 0;
  // D(x) = sum W_i^2 - sum d_i W_i - singular pair potential, fitted as
  // c_hat (+ q_hat * sum_i sum'_j (x_i - x_j)^2 for the harmonic kind).
  double c_hat = 0.0;
  std::optional<double> q_hat;
  double residual_std = 0.0;
  double scale = 1.0;
  double c_reference = 0.0;
  std::optional<double> q_reference;
  // Remainder fit: sum W^2 + sum dW at alpha minus sum W^2 - sum dW at alpha+1.
  double r_hat = 0.0;
  double r_residual_std = 0.0;
  std::optional<double> r_closed_form;  // calogero, cs
  std::optional<double> r_reference;  // harmonic, quoted closed form
  double tolerance = 1e-8;
  bool pass = false;  // constancy only

  double c_discrepancy() const { return c_hat - c_reference; }
};

ConstantFit constant_fit_diagnostic(const NBodyModel& model, const VerifyOptions& opt = {});
ResidualReport to_report(const ConstantFit& fit);
nlohmann::json to_json(const ConstantFit& fit);

// The six suite reports: factorization, shape_invariance, commutators,
// three_body, constant_fit, momentum.
std::vector<ResidualReport> run_verify_suite(const NBodyModel& model, const VerifyOptions& opt = {});

}  // namespace shapeinv
