#include "shapeinv/models.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "shapeinv/errors.hpp"
#include "shapeinv/random.hpp"

namespace shapeinv {

namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

void require_finite(std::span<const double> params, const char* what) {
  for (double p : params)
    if (!std::isfinite(p)) throw DomainError(std::string(what) + ": non-finite parameter");
}

double dist_to_pi_multiple(double d) { return std::abs(d - kPi * std::round(d / kPi)); }

double parse_double(const std::string& key, const std::string& text) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v))
    throw ConfigError("config key '" + key + "': not a finite number: '" + text + "'");
  return v;
}

}  // namespace

// ---------------------------------------------------------------------------
// Prepotential1D

std::string to_string(Family1D family) {
  switch (family) {
    case Family1D::rosen_morse_trig: return "rosen_morse_trig";
    case Family1D::rational_harmonic: return "rational_harmonic";
    case Family1D::sign: return "sign";
    case Family1D::coth_hyperbolic: return "coth_hyperbolic";
  }
  return "?";
}

Family1D family_from_string(const std::string& name) {
  std::string s = name;
  std::replace(s.begin(), s.end(), '-', '_');
  if (s == "rosen_morse_trig" || s == "rosen_morse" || s == "rm") return Family1D::rosen_morse_trig;
  if (s == "rational_harmonic" || s == "rational") return Family1D::rational_harmonic;
  if (s == "sign" || s == "sgn") return Family1D::sign;
  if (s == "coth_hyperbolic" || s == "coth") return Family1D::coth_hyperbolic;
  throw ConfigError("unknown 1-D family '" + name + "'");
}

Prepotential1D::Prepotential1D(Family1D family, std::vector<double> params)
    : family_(family), params_(std::move(params)) {
  const std::size_t want = family == Family1D::sign ? 1 : 2;
  if (params_.size() != want)
    throw DomainError(to_string(family) + ": expected " + std::to_string(want) + " parameters");
  require_finite(params_, "Prepotential1D");
  switch (family_) {
    case Family1D::rosen_morse_trig:
    case Family1D::coth_hyperbolic:
      if (!(params_[1] > 0.0)) throw DomainError(to_string(family_) + ": a must be > 0");
      break;
    case Family1D::rational_harmonic:
      if (!(params_[0] > 0.0)) throw DomainError("rational_harmonic: a must be > 0");
      break;
    case Family1D::sign:
      if (params_[0] == 0.0) throw DomainError("sign: a must be nonzero");
      break;
  }
}

double Prepotential1D::W(double x) const {
  switch (family_) {
    case Family1D::rosen_morse_trig: return -params_[0] / std::tan(params_[1] * x);
    case Family1D::rational_harmonic: return params_[0] * x + params_[1] / x;
    case Family1D::sign: return x > 0 ? params_[0] : (x < 0 ? -params_[0] : 0.0);
    case Family1D::coth_hyperbolic: return -params_[0] / std::tanh(params_[1] * x);
  }
  return 0.0;
}

double Prepotential1D::dW(double x) const {
  switch (family_) {
    case Family1D::rosen_morse_trig: {
      const double s = std::sin(params_[1] * x);
      return params_[0] * params_[1] / (s * s);
    }
    case Family1D::rational_harmonic: return params_[0] - params_[1] / (x * x);
    case Family1D::sign: return 0.0;
    case Family1D::coth_hyperbolic: {
      const double s = std::sinh(params_[1] * x);
      return params_[0] * params_[1] / (s * s);
    }
  }
  return 0.0;
}

std::vector<double> Prepotential1D::next_params() const {
  switch (family_) {
    case Family1D::rosen_morse_trig:
    case Family1D::coth_hyperbolic: return {params_[0] + params_[1], params_[1]};
    case Family1D::rational_harmonic: return {params_[0], params_[1] - 1.0};
    case Family1D::sign: return {-params_[0]};
  }
  return params_;
}

Remainder Prepotential1D::remainder_next() const { return remainder_1d(family_, next_params()); }

Remainder remainder_1d(Family1D family, std::span<const double> p) {
  require_finite(p, "remainder_1d");
  const std::size_t want = family == Family1D::sign ? 1 : 2;
  if (p.size() != want) throw DomainError(to_string(family) + ": wrong parameter count");
  switch (family) {
    case Family1D::rosen_morse_trig: {
      const double b1 = p[0], a1 = p[1];
      return {b1 * b1 - (b1 - a1) * (b1 - a1), a1 == 0.0};
    }
    case Family1D::coth_hyperbolic: {
      const double b1 = p[0], a1 = p[1];
      return {(b1 - a1) * (b1 - a1) - b1 * b1, a1 == 0.0};
    }
    case Family1D::rational_harmonic: return {4.0 * p[0], p[0] == 0.0};
    case Family1D::sign: return {0.0, true};
  }
  return {};
}

Remainder remainder_1d(const Prepotential1D& prep, std::span<const double> params_next) {
  return remainder_1d(prep.family(), params_next);
}

Interval Prepotential1D::natural_domain() const {
  const double inf = std::numeric_limits<double>::infinity();
  switch (family_) {
    case Family1D::rosen_morse_trig: return {0.0, kPi / params_[1]};
    case Family1D::rational_harmonic:
    case Family1D::coth_hyperbolic: return {0.0, inf};
    case Family1D::sign: return {-inf, inf};
  }
  return {0.0, 0.0};
}

double Prepotential1D::ground_state(double x) const {
  switch (family_) {
    case Family1D::rosen_morse_trig:
      return std::pow(std::abs(std::sin(params_[1] * x)), params_[0] / params_[1]);
    case Family1D::rational_harmonic:
      return std::pow(std::abs(x), -params_[1]) * std::exp(-0.5 * params_[0] * x * x);
    case Family1D::sign: return std::exp(-params_[0] * std::abs(x));
    case Family1D::coth_hyperbolic:
      return std::pow(std::abs(std::sinh(params_[1] * x)), params_[0] / params_[1]);
  }
  return 0.0;
}

bool Prepotential1D::ground_state_normalizable() const {
  switch (family_) {
    case Family1D::rosen_morse_trig: return params_[0] / params_[1] > 0.5;
    case Family1D::rational_harmonic: return -params_[1] > 0.5;
    case Family1D::sign: return params_[0] > 0.0;
    case Family1D::coth_hyperbolic: return false;
  }
  return false;
}

bool Prepotential1D::has_bound_ladder() const {
  switch (family_) {
    case Family1D::rosen_morse_trig: return params_[0] >= 0.0;
    case Family1D::rational_harmonic: return true;
    case Family1D::sign:
    case Family1D::coth_hyperbolic: return false;
  }
  return false;
}

std::string Prepotential1D::describe() const {
  std::ostringstream os;
  os << to_string(family_) << "(";
  switch (family_) {
    case Family1D::rosen_morse_trig:
    case Family1D::coth_hyperbolic: os << "b=" << fmt(params_[0]) << ", a=" << fmt(params_[1]); break;
    case Family1D::rational_harmonic: os << "a=" << fmt(params_[0]) << ", b=" << fmt(params_[1]); break;
    case Family1D::sign: os << "a=" << fmt(params_[0]); break;
  }
  os << ")";
  return os.str();
}

Prepotential1D make_prepotential_1d(Family1D family, std::vector<double> params) {
  return {family, std::move(params)};
}

// ---------------------------------------------------------------------------
// NBodyModel

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::calogero: return "calogero";
    case ModelKind::harmonic_calogero: return "harmonic_calogero";
    case ModelKind::calogero_sutherland: return "calogero_sutherland";
  }
  return "?";
}

ModelKind kind_from_string(const std::string& name) {
  std::string s = name;
  std::replace(s.begin(), s.end(), '-', '_');
  if (s == "calogero") return ModelKind::calogero;
  if (s == "harmonic" || s == "harmonic_calogero" || s == "hc") return ModelKind::harmonic_calogero;
  if (s == "cs" || s == "calogero_sutherland" || s == "sutherland")
    return ModelKind::calogero_sutherland;
  throw ConfigError("unknown model kind '" + name + "'");
}

NBodyModel::NBodyModel(const ModelSpec& spec) : spec_(spec) {
  if (spec_.n < 2) throw ConfigError("N must be >= 2, got " + std::to_string(spec_.n));
  if (!std::isfinite(spec_.alpha)) throw ConfigError("alpha must be finite");
  if (!(spec_.epsilon_sing > 0.0)) throw ConfigError("epsilon_sing must be > 0");
  const bool harmonic = spec_.kind == ModelKind::harmonic_calogero;
  if (harmonic && !spec_.omega) throw ConfigError("harmonic_calogero requires omega");
  if (!harmonic && spec_.omega) throw ConfigError("omega is only meaningful for harmonic_calogero");
  if (!harmonic && spec_.beta_override)
    throw ConfigError("beta_override is only meaningful for harmonic_calogero");
  if (harmonic) {
    if (!std::isfinite(*spec_.omega)) throw ConfigError("omega must be finite");
    beta_ = spec_.beta_override ? *spec_.beta_override
                                : *spec_.omega / (2.0 * std::sqrt(static_cast<double>(spec_.n)));
    if (!std::isfinite(beta_)) throw ConfigError("beta must be finite");
  }
}

double NBodyModel::c() const {
  const double n = spec_.n, a = spec_.alpha;
  switch (spec_.kind) {
    case ModelKind::calogero: return 0.0;
    case ModelKind::harmonic_calogero:
      return -(omega() / std::numbers::sqrt2) * std::sqrt(n) * (n - 1.0) * (a * n + 1.0);
    case ModelKind::calogero_sutherland: return -a * a * n * (n * n - 1.0) / 3.0;
  }
  return 0.0;
}

double NBodyModel::quadratic_coupling() const {
  return spec_.kind == ModelKind::harmonic_calogero ? 0.25 * omega() * omega() : 0.0;
}

std::optional<double> NBodyModel::remainder() const {
  const double n = spec_.n, a = spec_.alpha, a1 = a + 1.0;
  switch (spec_.kind) {
    case ModelKind::calogero: return 0.0;
    case ModelKind::harmonic_calogero: return std::nullopt;
    case ModelKind::calogero_sutherland: return (a1 * a1 - a * a) * n * (n * n - 1.0) / 3.0;
  }
  return std::nullopt;
}

double NBodyModel::harmonic_remainder_reference() const {
  const double n = spec_.n;
  return (omega() / std::numbers::sqrt2) * std::sqrt(n) * (n - 1.0) * n;
}

NBodyModel NBodyModel::with_alpha(double alpha) const {
  ModelSpec s = spec_;
  s.alpha = alpha;
  // Keep the same beta when shifting, whichever way it was chosen.
  if (s.kind == ModelKind::harmonic_calogero) s.beta_override = beta_;
  return NBodyModel(s);
}

double NBodyModel::min_separation(std::span<const double> x) const {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      const double d = x[i] - x[j];
      best = std::min(best, periodic() ? dist_to_pi_multiple(d) : std::abs(d));
    }
  return best;
}

void NBodyModel::check_configuration(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != spec_.n)
    throw DimensionError("configuration has " + std::to_string(x.size()) + " coordinates, model N = " +
                         std::to_string(spec_.n));
  for (double v : x)
    if (!std::isfinite(v)) throw SingularConfiguration("non-finite coordinate");
  const double s = min_separation(x);
  if (s < spec_.epsilon_sing)
    throw SingularConfiguration("coincident coordinates (separation " + fmt(s) + " < " +
                                fmt(spec_.epsilon_sing) + ")");
}

Eigen::VectorXd NBodyModel::prepotential(std::span<const double> x) const { return field(x).w; }

PrepotentialField NBodyModel::field(std::span<const double> x) const {
  check_configuration(x);
  const int n = spec_.n;
  const double a = spec_.alpha;
  PrepotentialField f{Eigen::VectorXd::Zero(n), Eigen::MatrixXd::Zero(n, n)};
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double d = x[i] - x[j];
      double w = 0.0, dw = 0.0;  // pair W(d) and W'(d)
      if (periodic()) {
        const double s = std::sin(d);
        w = -a * std::cos(d) / s;
        dw = a / (s * s);
      } else {
        w = -a / d;
        dw = a / (d * d);
        if (spec_.kind == ModelKind::harmonic_calogero) {
          w += beta_ * d;
          dw += beta_;
        }
      }
      f.w[i] += w;
      f.w[j] -= w;
      f.dw(i, i) += dw;
      f.dw(j, j) += dw;
      f.dw(i, j) -= dw;
      f.dw(j, i) -= dw;
    }
  return f;
}

double NBodyModel::singular_pair_potential(std::span<const double> x) const {
  check_configuration(x);
  double sum = 0.0;
  for (int i = 0; i < spec_.n; ++i)
    for (int j = i + 1; j < spec_.n; ++j) {
      const double d = x[i] - x[j];
      const double u = periodic() ? 1.0 / (std::sin(d) * std::sin(d)) : 1.0 / (d * d);
      sum += u;  // each unordered pair appears twice in the restricted double sum
    }
  return g() * sum;
}

double NBodyModel::quadratic_pair_sum(std::span<const double> x) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = i + 1; j < x.size(); ++j) sum += 2.0 * (x[i] - x[j]) * (x[i] - x[j]);
  return sum;
}

double NBodyModel::potential(std::span<const double> x) const {
  double v = singular_pair_potential(x) + c();
  if (spec_.kind == ModelKind::harmonic_calogero) v += quadratic_coupling() * quadratic_pair_sum(x);
  return v;
}

double NBodyModel::factorized_potential(std::span<const double> x) const {
  const auto f = field(x);
  return f.w.squaredNorm() - f.dw.trace();
}

double NBodyModel::partner_potential(std::span<const double> x) const {
  const auto f = field(x);
  return f.w.squaredNorm() + f.dw.trace();
}

double NBodyModel::jastrow_log(std::span<const double> x) const {
  check_configuration(x);
  const int n = spec_.n;
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double d = x[i] - x[j];
      s += spec_.alpha * std::log(std::abs(periodic() ? std::sin(d) : d));
    }
  if (spec_.kind == ModelKind::harmonic_calogero) {
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= n;
    double sq = 0.0;
    for (double v : x) sq += (v - mean) * (v - mean);
    s -= 0.5 * beta_ * n * sq;
  }
  return s;
}

std::string NBodyModel::describe() const {
  std::ostringstream os;
  os << to_string(spec_.kind) << "(N=" << spec_.n << ", alpha=" << fmt(spec_.alpha);
  if (spec_.kind == ModelKind::harmonic_calogero)
    os << ", omega=" << fmt(omega()) << ", beta=" << fmt(beta_);
  os << ")";
  return os.str();
}

NBodyModel make_nbody_model(ModelKind kind, int n, double alpha, std::optional<double> omega,
                            std::optional<double> beta_override) {
  ModelSpec s;
  s.kind = kind;
  s.n = n;
  s.alpha = alpha;
  s.omega = omega;
  s.beta_override = beta_override;
  return NBodyModel(s);
}

std::string to_config(const ModelSpec& spec) {
  std::ostringstream os;
  os << "kind = " << to_string(spec.kind) << "\n";
  os << "N = " << spec.n << "\n";
  os << "alpha = " << fmt(spec.alpha) << "\n";
  if (spec.omega) os << "omega = " << fmt(*spec.omega) << "\n";
  if (spec.beta_override) os << "beta_override = " << fmt(*spec.beta_override) << "\n";
  os << "epsilon_sing = " << fmt(spec.epsilon_sing) << "\n";
  return os.str();
}

ModelSpec model_spec_from_config(const std::map<std::string, std::string>& kv) {
  ModelSpec s;
  for (const auto& [key, value] : kv) {
    if (key == "kind") {
      s.kind = kind_from_string(value);
    } else if (key == "N") {
      const double v = parse_double(key, value);
      if (v != std::floor(v) || v < 0 || v > 1e6) throw ConfigError("N must be a small integer");
      s.n = static_cast<int>(v);
    } else if (key == "alpha") {
      s.alpha = parse_double(key, value);
    } else if (key == "omega") {
      s.omega = parse_double(key, value);
    } else if (key == "beta_override") {
      s.beta_override = parse_double(key, value);
    } else if (key == "epsilon_sing") {
      s.epsilon_sing = parse_double(key, value);
    } else {
      throw ConfigError("unknown model key '" + key + "'");
    }
  }
  NBodyModel check(s);  // validates
  return s;
}

// ---------------------------------------------------------------------------
// Pair rows

std::string to_string(PairRow row) {
  switch (row) {
    case PairRow::rational_harmonic: return "rational_harmonic";
    case PairRow::sign: return "sign";
    case PairRow::cot: return "cot";
    case PairRow::coth: return "coth";
  }
  return "?";
}

PairPrepotential::PairPrepotential(PairRow row, double a, double b) : row_(row), a_(a), b_(b) {
  if (!std::isfinite(a) || !std::isfinite(b)) throw DomainError("PairPrepotential: non-finite parameter");
}

// The table lists psi0'/psi0; W here is its negative.
double PairPrepotential::W(double x) const {
  switch (row_) {
    case PairRow::rational_harmonic: return -(a_ * x + b_ / x);
    case PairRow::sign: return x > 0 ? -a_ : (x < 0 ? a_ : 0.0);
    case PairRow::cot: return -a_ / std::tan(x);
    case PairRow::coth: return -a_ / std::tanh(x);
  }
  return 0.0;
}

double PairPrepotential::dW(double x) const {
  switch (row_) {
    case PairRow::rational_harmonic: return -(a_ - b_ / (x * x));
    case PairRow::sign: return 0.0;
    case PairRow::cot: return a_ / (std::sin(x) * std::sin(x));
    case PairRow::coth: return a_ / (std::sinh(x) * std::sinh(x));
  }
  return 0.0;
}

double PairPrepotential::v0(double x) const {
  switch (row_) {
    case PairRow::rational_harmonic:
      return b_ * (b_ - 1.0) / (x * x) + a_ * a_ * x * x + 2.0 * a_ * b_ + a_;
    case PairRow::sign: return a_ * a_;
    case PairRow::cot: return a_ * (a_ - 1.0) / (std::sin(x) * std::sin(x)) - a_ * a_;
    case PairRow::coth: return a_ * (a_ - 1.0) / (std::sinh(x) * std::sinh(x)) + a_ * a_;
  }
  return 0.0;
}

double PairPrepotential::vtilde(double x) const {
  switch (row_) {
    case PairRow::rational_harmonic: return a_ * b_ + 0.5 * a_ * a_ * x * x;
    case PairRow::sign: return a_ * a_ / 3.0;
    case PairRow::cot: return -a_ * a_ / 3.0;
    case PairRow::coth: return a_ * a_ / 3.0;
  }
  return 0.0;
}

double PairPrepotential::psi0(double x) const {
  switch (row_) {
    case PairRow::rational_harmonic:
      return std::pow(std::abs(x), b_) * std::exp(0.5 * a_ * x * x);
    case PairRow::sign: return std::exp(a_ * std::abs(x));
    case PairRow::cot: return std::pow(std::abs(std::sin(x)), a_);
    case PairRow::coth: return std::pow(std::abs(std::sinh(x)), a_);
  }
  return 0.0;
}

double PairPrepotential::distance_to_singularity(double x) const {
  return row_ == PairRow::cot ? dist_to_pi_multiple(x) : std::abs(x);
}

double pair_condition_residual(const PairPrepotential& pair, double A, double B,
                               const std::function<double(double)>& vtilde) {
  const double C = -A - B;
  const double wa = pair.W(A), wb = pair.W(B), wc = pair.W(C);
  const double lhs = -wa * wc - wa * wb - wc * wb;
  const double rhs = vtilde(A) + vtilde(B) + vtilde(C);
  return std::abs(lhs - rhs);
}

namespace {

// Products of W blow up near the singular points, so sampled residuals are
// taken relative to max(1, sum of |W W|).
double pair_condition_scale(const PairPrepotential& pair, double A, double B) {
  const double C = -A - B;
  const double wa = pair.W(A), wb = pair.W(B), wc = pair.W(C);
  return std::max({1.0, std::abs(wa * wc) + std::abs(wa * wb) + std::abs(wc * wb)});
}

}  // namespace

double pair_condition_residual(const PairPrepotential& pair, double A, double B) {
  return pair_condition_residual(pair, A, B, [&pair](double x) { return pair.vtilde(x); });
}

PairConditionStats check_pair_condition(const PairPrepotential& pair, int samples,
                                        std::uint64_t seed, double epsilon_sing,
                                        const std::function<double(double)>& vtilde) {
  if (samples < 1) throw ConfigError("check_pair_condition: samples must be >= 1");
  const double half = pair.row() == PairRow::cot ? kPi : 3.0;
  PairConditionStats st;
  double sum = 0.0;
  for (int t = 0; t < samples; ++t) {
    Rng rng(sub_seed(seed, static_cast<std::uint64_t>(t)));
    double A = 0, B = 0;
    for (;;) {
      A = rng.uniform(-half, half);
      B = rng.uniform(-half, half);
      const double C = -A - B;
      if (pair.distance_to_singularity(A) > epsilon_sing &&
          pair.distance_to_singularity(B) > epsilon_sing &&
          pair.distance_to_singularity(C) > epsilon_sing)
        break;
      ++st.resampled;
    }
    const double r = pair_condition_residual(pair, A, B, vtilde) / pair_condition_scale(pair, A, B);
    st.max_residual = std::max(st.max_residual, r);
    sum += r;
  }
  st.samples = samples;
  st.mean_residual = sum / samples;
  return st;
}

PairConditionStats check_pair_condition(const PairPrepotential& pair, int samples,
                                        std::uint64_t seed, double epsilon_sing) {
  return check_pair_condition(pair, samples, seed, epsilon_sing,
                              [&pair](double x) { return pair.vtilde(x); });
}

}  // namespace shapeinv
