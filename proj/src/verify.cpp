#include "shapeinv/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "shapeinv/calculus.hpp"
#include "shapeinv/errors.hpp"
#include "shapeinv/random.hpp"

namespace shapeinv {

namespace {

// Sub-seed stream reserved for the fits that other reports depend on, so the
// fit does not reuse the configurations of the report itself.
constexpr std::uint64_t kFitStream = 0x5eed0f17ULL;

void check_options(const VerifyOptions& opt) {
  if (opt.trials < 1) throw ConfigError("trials must be >= 1");
  if (!(opt.min_gap >= 0.0)) throw ConfigError("min_gap must be >= 0");
}

// The explicit case formulas for [A_i^dagger, A_j] (not taken from the
// Jacobian of the model).
double commutator_formula(const NBodyModel& m, int i, int j, std::span<const double> x) {
  const double a = m.alpha();
  auto u = [&](double d) {
    const double s = m.periodic() ? std::sin(d) : d;
    return 1.0 / (s * s);
  };
  if (i == j) {
    double s = 0.0;
    for (int k = 0; k < m.n(); ++k)
      if (k != i) s += -2.0 * a * u(x[i] - x[k]);
    if (m.kind() == ModelKind::harmonic_calogero) s += -2.0 * m.beta() * (m.n() - 1);
    return s;
  }
  double s = 2.0 * a * u(x[i] - x[j]);
  if (m.kind() == ModelKind::harmonic_calogero) s += 2.0 * m.beta();
  return s;
}

struct Trial {
  std::vector<double> x;
  Jet2 f;
  double scale;
};

Trial draw_trial(const NBodyModel& m, const VerifyOptions& opt, int t) {
  Rng rng(sub_seed(opt.seed, static_cast<std::uint64_t>(t)));
  const TestFunction f = random_test_function(m, rng);
  std::vector<double> x = sample_configuration(m, rng, opt.min_gap);
  Jet2 j = f(x);
  const double s = residual_scale(m, j, x);
  return {std::move(x), std::move(j), s};
}

void add_common_details(ResidualReport& r, const VerifyOptions& opt) { r.details["min_gap"] = opt.min_gap; }

}  // namespace

void ResidualAccumulator::add(double residual, const std::vector<double>& x) {
  ++count_;
  if (std::isnan(residual)) residual = std::numeric_limits<double>::infinity();
  sum_ += residual;
  if (count_ == 1 || residual > max_) {
    max_ = residual;
    worst_ = {x, residual};
  }
}

ResidualReport ResidualAccumulator::finish(std::string identity, const std::string& model,
                                           const VerifyOptions& opt, double tolerance) const {
  ResidualReport r;
  r.identity = std::move(identity);
  r.model = model;
  r.seed = opt.seed;
  r.trials = count_;
  r.max_residual = max_;
  r.mean_residual = count_ > 0 ? sum_ / count_ : 0.0;
  r.tolerance = tolerance;
  r.pass = count_ > 0 && std::isfinite(max_) && max_ <= tolerance;
  r.worst = worst_;
  add_common_details(r, opt);
  return r;
}

nlohmann::json to_json(const ResidualReport& r) {
  nlohmann::json j;
  j["identity"] = r.identity;
  j["model"] = r.model;
  j["seed"] = r.seed;
  j["trials"] = r.trials;
  j["max_residual"] = r.max_residual;
  j["mean_residual"] = r.mean_residual;
  j["tolerance"] = r.tolerance;
  j["pass"] = r.pass;
  j["worst_sample"] = {{"x", r.worst.x}, {"residual", r.worst.residual}};
  j["details"] = r.details;
  if (!r.notes.empty()) j["notes"] = r.notes;
  return j;
}

// ---------------------------------------------------------------------------

ConstantFit constant_fit_diagnostic(const NBodyModel& model, const VerifyOptions& opt) {
  check_options(opt);
  const bool harmonic = model.kind() == ModelKind::harmonic_calogero;
  const NBodyModel up = model.shifted();
  const int n = opt.trials;
  Eigen::MatrixXd design(n, harmonic ? 2 : 1);
  Eigen::VectorXd d(n), rdiff(n);
  double scale = 1.0;
  for (int t = 0; t < n; ++t) {
    Rng rng(sub_seed(opt.seed, static_cast<std::uint64_t>(t)));
    const std::vector<double> x = sample_configuration(model, rng, opt.min_gap);
    const PrepotentialField f = model.field(x);
    const double w2 = f.w.squaredNorm();
    const double dws = f.dw.trace();
    const double vs = model.singular_pair_potential(x);
    d[t] = w2 - dws - vs;
    design(t, 0) = 1.0;
    if (harmonic) design(t, 1) = model.quadratic_pair_sum(x);
    const PrepotentialField fu = up.field(x);
    rdiff[t] = (w2 + dws) - (fu.w.squaredNorm() - fu.dw.trace());
    scale = std::max({scale, w2 + std::abs(dws) + std::abs(vs), fu.w.squaredNorm() + std::abs(fu.dw.trace())});
  }
  ConstantFit fit;
  fit.model = model.describe();
  fit.samples = n;
  fit.seed = opt.seed;
  fit.scale = scale;
  fit.tolerance = opt.tol_identity;
  const Eigen::VectorXd coef = design.colPivHouseholderQr().solve(d);
  fit.c_hat = coef[0];
  if (harmonic) {
    fit.q_hat = coef[1];
    fit.q_reference = model.quadratic_coupling();
  }
  fit.residual_std = std::sqrt((d - design * coef).squaredNorm() / n);
  fit.c_reference = model.c();
  fit.r_hat = rdiff.mean();
  fit.r_residual_std = std::sqrt((rdiff.array() - fit.r_hat).square().mean());
  if (auto r = model.remainder()) fit.r_closed_form = *r;
  if (harmonic) fit.r_reference = model.harmonic_remainder_reference();
  fit.pass = std::isfinite(fit.residual_std) && fit.residual_std <= opt.tol_identity * scale &&
             std::isfinite(fit.r_residual_std) && fit.r_residual_std <= opt.tol_identity * scale;
  return fit;
}

ResidualReport to_report(const ConstantFit& fit) {
  ResidualReport r;
  r.identity = "constant_fit";
  r.model = fit.model;
  r.seed = fit.seed;
  r.trials = fit.samples;
  r.max_residual = std::max(fit.residual_std, fit.r_residual_std) / fit.scale;
  r.mean_residual = 0.5 * (fit.residual_std + fit.r_residual_std) / fit.scale;
  r.tolerance = fit.tolerance;
  r.pass = fit.pass;
  r.details["c_hat"] = fit.c_hat;
  r.details["c_reference"] = fit.c_reference;
  r.details["c_discrepancy"] = fit.c_discrepancy();
  r.details["residual_std"] = fit.residual_std;
  r.details["scale"] = fit.scale;
  r.details["r_hat"] = fit.r_hat;
  r.details["r_residual_std"] = fit.r_residual_std;
  if (fit.q_hat) {
    r.details["q_hat"] = *fit.q_hat;
    r.details["q_reference"] = *fit.q_reference;
    r.details["q_discrepancy"] = *fit.q_hat - *fit.q_reference;
  }
  if (fit.r_closed_form) r.details["r_closed_form"] = *fit.r_closed_form;
  if (fit.r_reference) {
    r.details["r_reference"] = *fit.r_reference;
    r.details["r_discrepancy"] = fit.r_hat - *fit.r_reference;
  }
  r.notes["assertion"] = "constancy of the fitted difference only";
  return r;
}

nlohmann::json to_json(const ConstantFit& fit) { return to_json(to_report(fit)); }

// ---------------------------------------------------------------------------

ResidualReport factorization_residual(const NBodyModel& model, const VerifyOptions& opt) {
  check_options(opt);
  const bool harmonic = model.kind() == ModelKind::harmonic_calogero;
  double q = model.quadratic_coupling(), c = model.c();
  std::optional<ConstantFit> fit;
  if (harmonic) {
    VerifyOptions fo = opt;
    fo.seed = sub_seed(opt.seed, kFitStream);
    fit = constant_fit_diagnostic(model, fo);
    q = *fit->q_hat;
    c = fit->c_hat;
  }
  ResidualAccumulator acc;
  for (int t = 0; t < opt.trials; ++t) {
    const Trial tr = draw_trial(model, opt, t);
    double direct = apply_hamiltonian_direct(model, tr.f, tr.x);
    if (harmonic) {
      const double v = model.singular_pair_potential(tr.x) + q * model.quadratic_pair_sum(tr.x) + c;
      direct = -tr.f.laplacian() + v * tr.f.value;
    }
    const double fact = apply_hamiltonian_factorized(model, tr.f, tr.x);
    acc.add(std::abs(direct - fact) / tr.scale, tr.x);
  }
  ResidualReport r = acc.finish("factorization", model.describe(), opt, opt.tol_identity);
  r.details["c_used"] = c;
  if (harmonic) {
    r.details["q_used"] = q;
    r.details["q_reference"] = model.quadratic_coupling();
    r.details["c_reference"] = model.c();
    r.notes["reference"] = "direct side uses the fitted quadratic coefficient and constant";
  }
  return r;
}

ResidualReport shape_invariance_residual(const NBodyModel& model, const VerifyOptions& opt) {
  check_options(opt);
  const NBodyModel up = model.shifted();
  double R = 0.0;
  ResidualReport extra;
  if (auto r = model.remainder()) {
    R = *r;
  } else {
    VerifyOptions fo = opt;
    fo.seed = sub_seed(opt.seed, kFitStream);
    const ConstantFit fit = constant_fit_diagnostic(model, fo);
    R = fit.r_hat;
    extra.details["r_reference"] = *fit.r_reference;
    extra.details["r_discrepancy"] = R - *fit.r_reference;
    extra.notes["reference"] = "R taken from the remainder fit";
  }
  ResidualAccumulator acc;
  for (int t = 0; t < opt.trials; ++t) {
    const Trial tr = draw_trial(model, opt, t);
    const double partner = apply_partner(model, tr.f, tr.x);
    const double shifted = apply_hamiltonian_factorized(up, tr.f, tr.x);
    const double s = std::max(tr.scale, residual_scale(up, tr.f, tr.x));
    acc.add(std::abs(partner - shifted - R * tr.f.value) / s, tr.x);
  }
  ResidualReport r = acc.finish("shape_invariance", model.describe(), opt, opt.tol_identity);
  r.details["alpha_1"] = up.alpha();
  r.details["R"] = R;
  for (auto& [k, v] : extra.details) r.details[k] = v;
  for (auto& [k, v] : extra.notes) r.notes[k] = v;
  return r;
}

ResidualReport commutator_check(const NBodyModel& model, const VerifyOptions& opt) {
  check_options(opt);
  const int n = model.n();
  ResidualAccumulator acc;
  for (int t = 0; t < opt.trials; ++t) {
    const Trial tr = draw_trial(model, opt, t);
    double worst = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double aa = commutator(model, annihilate(i), annihilate(j), tr.f, tr.x);
        const double cc = commutator(model, create(i), create(j), tr.f, tr.x);
        const double ca = commutator(model, create(i), annihilate(j), tr.f, tr.x);
        const double expect = commutator_formula(model, i, j, tr.x) * tr.f.value;
        worst = std::max({worst, std::abs(aa), std::abs(cc), std::abs(ca - expect)});
      }
    acc.add(worst / tr.scale, tr.x);
  }
  return acc.finish("commutators", model.describe(), opt, opt.tol_structural);
}

ResidualReport momentum_commutation(const NBodyModel& model, const VerifyOptions& opt) {
  check_options(opt);
  ResidualAccumulator acc;
  for (int t = 0; t < opt.trials; ++t) {
    const Trial tr = draw_trial(model, opt, t);
    double worst = 0.0;
    for (int i = 0; i < model.n(); ++i) {
      worst = std::max(worst, std::abs(commutator(model, momentum(), annihilate(i), tr.f, tr.x)));
      worst = std::max(worst, std::abs(commutator(model, momentum(), create(i), tr.f, tr.x)));
    }
    acc.add(worst / tr.scale, tr.x);
  }
  return acc.finish("momentum", model.describe(), opt, opt.tol_structural);
}

ResidualReport prepotential_invariants(const NBodyModel& model, const VerifyOptions& opt) {
  check_options(opt);
  ResidualAccumulator acc;
  for (int t = 0; t < opt.trials; ++t) {
    Rng rng(sub_seed(opt.seed, static_cast<std::uint64_t>(t)));
    const std::vector<double> x = sample_configuration(model, rng, opt.min_gap);
    const PrepotentialField f = model.field(x);
    const double sum = std::abs(f.w.sum()) / std::max(1.0, f.w.cwiseAbs().maxCoeff());
    const double curl =
        (f.dw - f.dw.transpose()).cwiseAbs().maxCoeff() / std::max(1.0, f.dw.cwiseAbs().maxCoeff());
    acc.add(std::max(sum, curl), x);
  }
  return acc.finish("prepotential_invariants", model.describe(), opt, opt.tol_exact);
}

ResidualReport jacobi_equivalence(const NBodyModel& model, const VerifyOptions& opt) {
  check_options(opt);
  const int n = model.n();
  ResidualAccumulator acc;
  for (int t = 0; t < opt.trials; ++t) {
    const Trial tr = draw_trial(model, opt, t);
    double worst = std::abs(apply_jacobi_hamiltonian(model, tr.f, tr.x) -
                            apply_hamiltonian_factorized(model, tr.f, tr.x));
    for (int a = 0; a < n; ++a) {
      worst = std::max(worst, std::abs(commutator(model, jacobi(n - 1), jacobi_dagger(a), tr.f, tr.x)));
      worst = std::max(worst, std::abs(commutator(model, jacobi(n - 1), jacobi(a), tr.f, tr.x)));
    }
    acc.add(worst / tr.scale, tr.x);
  }
  return acc.finish("jacobi_equivalence", model.describe(), opt, opt.tol_exact);
}

ResidualReport jastrow_residual(const NBodyModel& model, const VerifyOptions& opt) {
  check_options(opt);
  const TestFunction phi = tf::jastrow(model);
  ResidualAccumulator acc;
  for (int t = 0; t < opt.trials; ++t) {
    Rng rng(sub_seed(opt.seed, static_cast<std::uint64_t>(t)));
    const std::vector<double> x = sample_configuration(model, rng, opt.min_gap);
    const Jet2 j = phi(x);
    const double h = model.kind() == ModelKind::harmonic_calogero ? apply_hamiltonian_factorized(model, j, x)
                                                                   : apply_hamiltonian_direct(model, j, x);
    acc.add(std::abs(h) / residual_scale(model, j, x), x);
  }
  return acc.finish("jastrow_ground_state", model.describe(), opt, opt.tol_identity);
}

// ---------------------------------------------------------------------------

ThreeBodyKind three_body_kind(ModelKind kind) {
  return kind == ModelKind::calogero_sutherland ? ThreeBodyKind::trigonometric : ThreeBodyKind::rational;
}

ThreeBodyResult three_body_cancellation(ThreeBodyKind kind, double xi, double xj, double xk,
                                        double epsilon_sing) {
  const double a = xi - xj, b = xj - xk, c = xk - xi;
  auto near = [&](double d) {
    const double r = kind == ThreeBodyKind::trigonometric
                         ? std::abs(d - std::numbers::pi * std::round(d / std::numbers::pi))
                         : std::abs(d);
    return r < epsilon_sing;
  };
  if (near(a) || near(b) || near(c))
    throw SingularConfiguration("three_body_cancellation: coincident coordinates");
  double t1, t2, t3, exact;
  if (kind == ThreeBodyKind::rational) {
    t1 = 1.0 / ((xi - xj) * (xi - xk));
    t2 = 1.0 / ((xj - xi) * (xj - xk));
    t3 = 1.0 / ((xk - xi) * (xk - xj));
    exact = 0.0;
  } else {
    const double ca = 1.0 / std::tan(a), cb = 1.0 / std::tan(b), cc = 1.0 / std::tan(c);
    t1 = ca * cb;
    t2 = cb * cc;
    t3 = cc * ca;
    exact = 1.0;
  }
  const double sum_abs = std::abs(t1) + std::abs(t2) + std::abs(t3);
  ThreeBodyResult r;
  r.absolute = std::abs(t1 + t2 + t3 - exact);
  r.relative = r.absolute / std::max(1.0, sum_abs);
  r.condition = sum_abs / std::max(1.0, std::abs(exact));
  return r;
}

ResidualReport three_body_report(ThreeBodyKind kind, const VerifyOptions& opt) {
  check_options(opt);
  const double hi = kind == ThreeBodyKind::trigonometric ? std::numbers::pi : 4.0;
  ResidualAccumulator acc;
  for (int t = 0; t < opt.trials; ++t) {
    Rng rng(sub_seed(opt.seed, static_cast<std::uint64_t>(t)));
    std::vector<double> x(3);
    for (;;) {
      for (auto& v : x) v = rng.uniform(0.0, hi);
      bool ok = true;
      for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) {
          double d = x[i] - x[j];
          if (kind == ThreeBodyKind::trigonometric)
            d = d - std::numbers::pi * std::round(d / std::numbers::pi);
          if (std::abs(d) < opt.min_gap) ok = false;
        }
      if (ok) break;
    }
    acc.add(three_body_cancellation(kind, x[0], x[1], x[2]).relative, x);
  }
  ResidualReport r = acc.finish("three_body", kind == ThreeBodyKind::rational ? "rational" : "trigonometric",
                                opt, opt.tol_exact);
  return r;
}

std::vector<ResidualReport> run_verify_suite(const NBodyModel& model, const VerifyOptions& opt) {
  std::vector<ResidualReport> out;
  out.push_back(factorization_residual(model, opt));
  out.push_back(shape_invariance_residual(model, opt));
  out.push_back(commutator_check(model, opt));
  ResidualReport tb = three_body_report(three_body_kind(model.kind()), opt);
  tb.model = model.describe() + " [" + tb.model + "]";
  out.push_back(tb);
  out.push_back(to_report(constant_fit_diagnostic(model, opt)));
  out.push_back(momentum_commutation(model, opt));
  return out;
}

}  // namespace shapeinv
