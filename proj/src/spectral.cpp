#include "shapeinv/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include <Eigen/SparseCholesky>

#include "shapeinv/errors.hpp"
#include "shapeinv/io.hpp"
#include "shapeinv/random.hpp"
#include "shapeinv/verify.hpp"

namespace shapeinv {

namespace {
constexpr double kPi = std::numbers::pi;
}

std::string to_string(Sector s) { return s == Sector::full ? "full" : "ordered"; }

Sector sector_from_string(const std::string& name) {
  if (name == "full") return Sector::full;
  if (name == "ordered") return Sector::ordered;
  throw ConfigError("unknown sector: " + name);
}

std::string to_string(FormN f) {
  switch (f) {
    case FormN::direct: return "direct";
    case FormN::factorized: return "factorized";
    case FormN::partner: return "partner";
  }
  return "?";
}

EigenMethod eigen_method_from_string(const std::string& name) {
  if (name == "automatic" || name == "auto") return EigenMethod::automatic;
  if (name == "dense") return EigenMethod::dense;
  if (name == "iterative" || name == "lanczos") return EigenMethod::iterative;
  throw ConfigError("unknown eigen method: " + name);
}

// ---------------------------------------------------------------------------
// Grid

double GridSpec::h(int axis) const {
  const GridAxis& a = axes.at(axis);
  return boundary == Boundary::periodic ? (a.max - a.min) / a.m : (a.max - a.min) / (a.m + 1);
}

double GridSpec::coordinate(int axis, int k) const {
  const GridAxis& a = axes.at(axis);
  return boundary == Boundary::periodic ? a.min + k * h(axis) : a.min + (k + 1) * h(axis);
}

void GridSpec::validate() const {
  if (axes.empty()) throw ConfigError("grid has no axes");
  for (const GridAxis& a : axes) {
    if (a.m < 8) throw ConfigError("grid needs at least 8 unknowns per axis");
    if (!(a.max > a.min) || !std::isfinite(a.min) || !std::isfinite(a.max))
      throw ConfigError("grid axis needs finite min < max");
  }
  if (sector == Sector::ordered) {
    if (boundary != Boundary::dirichlet) throw ConfigError("ordered sector requires dirichlet boundaries");
    for (const GridAxis& a : axes)
      if (a.min != axes[0].min || a.max != axes[0].max || a.m != axes[0].m)
        throw ConfigError("ordered sector requires identical axes");
  }
}

std::string GridSpec::describe() const {
  std::ostringstream os;
  os << "grid(d=" << dimension() << ", " << to_string(boundary) << ", " << to_string(sector);
  for (const GridAxis& a : axes)
    os << ", [" << format_double(a.min) << "," << format_double(a.max) << "]x" << a.m;
  os << ")";
  return os.str();
}

GridSpec interval_grid(double lo, double hi, int m, Boundary b) {
  return GridSpec{{GridAxis{lo, hi, m}}, b, Sector::full};
}

GridSpec cube_grid(int d, double lo, double hi, int m, Sector sector) {
  return GridSpec{std::vector<GridAxis>(d, GridAxis{lo, hi, m}), Boundary::dirichlet, sector};
}

double SparseHamiltonian::norm_inf() const {
  Eigen::VectorXd rows = Eigen::VectorXd::Zero(matrix.rows());
  for (int c = 0; c < matrix.outerSize(); ++c)
    for (Eigen::SparseMatrix<double>::InnerIterator it(matrix, c); it; ++it) rows[it.row()] += std::abs(it.value());
  return rows.size() ? rows.maxCoeff() : 0.0;
}

namespace {

// Unknowns of a grid and the map from index tuples back to positions.
class Lattice {
 public:
  explicit Lattice(const GridSpec& g) : g_(g) {
    g.validate();
    const int d = g.dimension();
    std::vector<int> t(d, 0);
    if (g.sector == Sector::ordered) {
      const int m = g.axes[0].m;
      if (m < d) throw ConfigError("ordered sector needs m >= dimension");
      for (int a = 0; a < d; ++a) t[a] = a;
      while (true) {
        add(t);
        int a = d - 1;
        while (a >= 0 && t[a] == m - d + a) --a;
        if (a < 0) break;
        ++t[a];
        for (int b = a + 1; b < d; ++b) t[b] = t[b - 1] + 1;
      }
    } else {
      while (true) {
        add(t);
        int a = d - 1;
        while (a >= 0 && t[a] == g.axes[a].m - 1) t[a--] = 0;
        if (a < 0) break;
        ++t[a];
      }
    }
  }

  const std::vector<std::vector<int>>& tuples() const { return tuples_; }

  std::vector<double> coords(const std::vector<int>& t) const {
    std::vector<double> x(t.size());
    for (std::size_t a = 0; a < t.size(); ++a) x[a] = g_.coordinate(static_cast<int>(a), t[a]);
    return x;
  }

  // Position and sign of the value at tuple t shifted by `off` along `axis`,
  // after wall reflection and (ordered sector) antisymmetric sorting. Sign 0
  // means the value is a Dirichlet zero.
  std::pair<int, int> neighbor(std::vector<int> t, int axis, int off) const {
    int sign = 1;
    const int m = g_.axes[axis].m;
    int k = t[axis] + off;
    if (g_.boundary == Boundary::periodic) {
      k = ((k % m) + m) % m;
    } else {
      if (k == -1 || k == m) return {0, 0};
      if (k < -1) {
        k = -2 - k;
        sign = -sign;
      } else if (k > m) {
        k = 2 * m - k;
        sign = -sign;
      }
    }
    t[axis] = k;
    if (g_.sector == Sector::ordered) {
      // insertion sort, counting transpositions
      for (std::size_t i = 1; i < t.size(); ++i)
        for (std::size_t j = i; j > 0 && t[j - 1] >= t[j]; --j) {
          if (t[j - 1] == t[j]) return {0, 0};
          std::swap(t[j - 1], t[j]);
          sign = -sign;
        }
    }
    auto it = map_.find(key(t));
    if (it == map_.end()) return {0, 0};
    return {it->second, sign};
  }

 private:
  std::int64_t key(const std::vector<int>& t) const {
    std::int64_t k = 0;
    for (std::size_t a = 0; a < t.size(); ++a) k = k * (g_.axes[a].m + 1) + t[a];
    return k;
  }
  void add(const std::vector<int>& t) {
    map_.emplace(key(t), static_cast<int>(tuples_.size()));
    tuples_.push_back(t);
  }

  const GridSpec& g_;
  std::vector<std::vector<int>> tuples_;
  std::unordered_map<std::int64_t, int> map_;
};

struct StencilTap {
  int offset;
  double weight;  // coefficient of u(x + offset h) in the second derivative times h^2
};

std::vector<StencilTap> second_derivative_taps(int order) {
  if (order == 2) return {{-1, 1.0}, {1, 1.0}};
  if (order == 4) return {{-2, -1.0 / 12}, {-1, 16.0 / 12}, {1, 16.0 / 12}, {2, -1.0 / 12}};
  throw ConfigError("stencil order must be 2 or 4");
}

double centre_weight(int order) { return order == 2 ? -2.0 : -30.0 / 12; }

}  // namespace

SparseHamiltonian discretize(const std::function<double(const std::vector<double>&)>& potential,
                             const GridSpec& grid, int stencil_order, double kinetic,
                             std::string description) {
  const Lattice lat(grid);
  const auto taps = second_derivative_taps(stencil_order);
  const int n = static_cast<int>(lat.tuples().size());
  const int d = grid.dimension();

  SparseHamiltonian out;
  out.grid = grid;
  out.stencil_order = stencil_order;
  out.description = std::move(description);
  out.index = lat.tuples();
  out.coords.reserve(n);
  out.min_potential = std::numeric_limits<double>::infinity();

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(n) * (1 + d * taps.size()));
  for (int i = 0; i < n; ++i) {
    const auto& t = lat.tuples()[i];
    out.coords.push_back(lat.coords(t));
    double v;
    try {
      v = potential(out.coords.back());
    } catch (const SingularConfiguration& e) {
      throw DomainError(std::string("grid node on a singularity: ") + e.what());
    }
    if (!std::isfinite(v)) throw DomainError("potential is not finite at a grid node");
    out.min_potential = std::min(out.min_potential, v);
    double diag = v;
    for (int a = 0; a < d; ++a) {
      const double s = kinetic / (grid.h(a) * grid.h(a));
      diag -= s * centre_weight(stencil_order);
      for (const StencilTap& tap : taps) {
        const auto [j, sign] = lat.neighbor(t, a, tap.offset);
        if (sign != 0) trip.emplace_back(i, j, -s * tap.weight * sign);
      }
    }
    trip.emplace_back(i, i, diag);
  }
  out.matrix.resize(n, n);
  out.matrix.setFromTriplets(trip.begin(), trip.end());
  out.matrix.makeCompressed();
  return out;
}

SparseHamiltonian discretize(const Prepotential1D& prep, const GridSpec& grid, Form1D form,
                             int stencil_order) {
  if (grid.dimension() != 1) throw DimensionError("1-D prepotential needs a 1-D grid");
  auto v = [&](const std::vector<double>& x) {
    return form == Form1D::potential ? prep.potential(x[0]) : prep.partner_potential(x[0]);
  };
  return discretize(v, grid, stencil_order, 1.0,
                    prep.describe() + (form == Form1D::potential ? " A^dagger A" : " A A^dagger"));
}

SparseHamiltonian discretize(const NBodyModel& model, const GridSpec& grid, FormN form,
                             int stencil_order) {
  if (grid.dimension() != model.n())
    throw DimensionError("grid dimension " + std::to_string(grid.dimension()) + " != N = " +
                         std::to_string(model.n()));
  if (model.periodic())
    throw ConfigError("the periodic kind is discretized only through two_body_reduction");
  if (model.g() != 0.0 && grid.sector != Sector::ordered)
    throw ConfigError("singular pair potentials need the ordered sector");
  auto v = [&](const std::vector<double>& x) {
    switch (form) {
      case FormN::direct: return model.potential(x);
      case FormN::factorized: return model.factorized_potential(x);
      case FormN::partner: return model.partner_potential(x);
    }
    return 0.0;
  };
  return discretize(v, grid, stencil_order, 1.0, model.describe() + " " + to_string(form));
}

// ---------------------------------------------------------------------------
// Eigensolvers

namespace {

double sparse_norm_inf(const Eigen::SparseMatrix<double>& h) {
  Eigen::VectorXd rows = Eigen::VectorXd::Zero(h.rows());
  for (int c = 0; c < h.outerSize(); ++c)
    for (Eigen::SparseMatrix<double>::InnerIterator it(h, c); it; ++it) rows[it.row()] += std::abs(it.value());
  return rows.size() ? rows.maxCoeff() : 0.0;
}

void fill_residuals(const Eigen::SparseMatrix<double>& h, SpectrumResult& r) {
  r.residuals.resize(r.values.size());
  for (std::size_t i = 0; i < r.values.size(); ++i) {
    const Eigen::VectorXd v = r.vectors.col(static_cast<Eigen::Index>(i));
    r.residuals[i] = (h * v - r.values[i] * v).norm();
  }
}

bool within_contract(const SpectrumResult& r, double tol) {
  for (double res : r.residuals)
    if (!(res <= tol * std::max(1.0, r.norm_estimate))) return false;
  return true;
}

SpectrumResult dense_eigen(const Eigen::SparseMatrix<double>& h, int k) {
  const Eigen::MatrixXd full(h);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(full);
  if (es.info() != Eigen::Success) throw ConvergenceError("dense eigensolver failed", {});
  SpectrumResult r;
  r.method = "dense";
  r.values.assign(es.eigenvalues().data(), es.eigenvalues().data() + k);
  r.vectors = es.eigenvectors().leftCols(k);
  return r;
}

// Lanczos on (H - shift)^-1 with full reorthogonalization. Returns false with
// the best residuals when the Krylov space is too small.
bool lanczos(const Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>& fact,
             const Eigen::SparseMatrix<double>& h, int k, int m, double shift, std::uint64_t seed,
             double tol, SpectrumResult& out) {
  const int n = static_cast<int>(h.rows());
  m = std::min(m, n);
  Eigen::MatrixXd V(n, m + 1);
  std::vector<double> alpha, beta;
  Rng rng(seed);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = rng.normal();
  V.col(0) = v / v.norm();
  int used = 0;
  for (int j = 0; j < m; ++j) {
    Eigen::VectorXd w = fact.solve(V.col(j));
    const double a = V.col(j).dot(w);
    alpha.push_back(a);
    for (int pass = 0; pass < 2; ++pass) w -= V.leftCols(j + 1) * (V.leftCols(j + 1).transpose() * w);
    const double b = w.norm();
    used = j + 1;
    if (b < 1e-13 * std::abs(a) || j + 1 == m) break;
    beta.push_back(b);
    V.col(j + 1) = w / b;
  }
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(used, used);
  for (int i = 0; i < used; ++i) {
    T(i, i) = alpha[i];
    if (i + 1 < used) T(i, i + 1) = T(i + 1, i) = beta[i];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
  const int got = std::min(k, used);
  out.values.clear();
  out.vectors.resize(n, got);
  // Largest theta first: smallest lambda.
  for (int i = 0; i < got; ++i) {
    const int col = used - 1 - i;
    out.values.push_back(shift + 1.0 / es.eigenvalues()[col]);
    Eigen::VectorXd y = V.leftCols(used) * es.eigenvectors().col(col);
    out.vectors.col(i) = y / y.norm();
  }
  out.iterations += used;
  fill_residuals(h, out);
  return got == k && within_contract(out, tol);
}

}  // namespace

SpectrumResult eigen(const Eigen::SparseMatrix<double>& h, int k, double shift, const EigenOptions& opt) {
  const int n = static_cast<int>(h.rows());
  if (h.rows() != h.cols()) throw DimensionError("eigen: matrix is not square");
  if (k < 1 || k >= n) throw DimensionError("eigen: need 1 <= k < dimension");
  const double norm = sparse_norm_inf(h);

  const bool dense_ok = n < opt.dense_limit;
  if (opt.method == EigenMethod::dense) {
    if (n > 20000) throw DimensionError("dense eigensolver refused above dimension 20000");
    SpectrumResult r = dense_eigen(h, k);
    r.norm_estimate = norm;
    fill_residuals(h, r);
    return r;
  }

  Eigen::SparseMatrix<double> shifted = h;
  for (int i = 0; i < n; ++i) shifted.coeffRef(i, i) -= shift;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> fact(shifted);
  if (fact.info() != Eigen::Success) throw ConvergenceError("shift-invert factorization failed", {});

  SpectrumResult r;
  r.method = "lanczos";
  r.norm_estimate = norm;
  int m = std::max(2 * k + 20, 40);
  std::vector<double> best;
  for (int attempt = 0; attempt <= opt.max_restarts; ++attempt, m *= 2) {
    if (lanczos(fact, h, k, m, shift, sub_seed(opt.seed, attempt), opt.tolerance, r)) {
      // Lanczos returns ascending lambda already; keep the contract explicit.
      return r;
    }
    if (best.empty() || (!r.residuals.empty() && r.residuals.back() < best.back())) best = r.residuals;
    if (m >= n) break;
  }
  if (opt.method == EigenMethod::automatic && dense_ok) {
    SpectrumResult d = dense_eigen(h, k);
    d.norm_estimate = norm;
    d.iterations = r.iterations;
    fill_residuals(h, d);
    d.method = "dense-fallback";
    return d;
  }
  throw ConvergenceError("Lanczos did not reach the residual contract", best);
}

SpectrumResult eigen(const SparseHamiltonian& h, int k, const EigenOptions& opt) {
  return eigen(h.matrix, k, opt.shift.value_or(h.shift()), opt);
}

void write_spectrum_csv(std::ostream& os, const SpectrumResult& r) {
  os << "index,lambda,residual\n";
  for (std::size_t i = 0; i < r.values.size(); ++i)
    os << i << ',' << format_double(r.values[i]) << ',' << format_double(r.residuals.at(i)) << '\n';
}

void write_grid_dump(std::ostream& os, const SparseHamiltonian& h, const Eigen::VectorXd& values) {
  if (values.size() != h.size()) throw DimensionError("grid dump: value count mismatch");
  const GridSpec& g = h.grid;
  os << "# dimension " << g.dimension() << '\n';
  os << "# axes";
  for (const GridAxis& a : g.axes) os << ' ' << format_double(a.min) << ':' << format_double(a.max);
  os << "\n# m";
  for (const GridAxis& a : g.axes) os << ' ' << a.m;
  os << "\n# boundary " << to_string(g.boundary) << "\n# sector " << to_string(g.sector)
     << "\n# ordering row-major\n# unknowns " << h.size() << '\n';
  for (int i = 0; i < h.size(); ++i) {
    for (double x : h.coords[i]) os << format_double(x) << ' ';
    os << format_double(values[i]) << '\n';
  }
}

// ---------------------------------------------------------------------------
// Ground states

namespace {

void normalizability_warnings(const NBodyModel& model, bool& normalizable, std::vector<std::string>& warnings) {
  const double a = model.alpha();
  if (a <= 0.5) {
    normalizable = false;
    warnings.push_back("alpha <= 1/2: the product state has infinite kinetic energy at coincidences");
  } else if (a < 1.0) {
    warnings.push_back("1/2 < alpha < 1: coincidence boundary condition is not fixed; spectral checks exclude this range");
  }
  if (model.kind() == ModelKind::calogero) {
    normalizable = false;
    warnings.push_back("no confinement: the product state sits at the continuum edge");
  } else if (model.kind() == ModelKind::harmonic_calogero) {
    warnings.push_back("centre of mass is free; the state is normalizable in relative coordinates only");
  }
}

}  // namespace

JastrowGroundState jastrow_ground_state(const NBodyModel& model, const GridSpec& grid, int stencil_order,
                                        double margin, std::uint64_t seed) {
  if (grid.dimension() != model.n()) throw DimensionError("grid dimension must equal N");
  if (grid.sector != Sector::ordered && model.g() != 0.0)
    throw ConfigError("jastrow_ground_state needs the ordered sector");
  const Lattice lat(grid);
  const auto taps = second_derivative_taps(stencil_order);
  JastrowGroundState out;
  out.grid = grid;
  normalizability_warnings(model, out.normalizable, out.warnings);

  VerifyOptions vo;
  vo.seed = seed;
  out.jet_residual = jastrow_residual(model, vo).max_residual;

  const int d = grid.dimension();
  double hmin = std::numeric_limits<double>::infinity();
  for (int a = 0; a < d; ++a) hmin = std::min(hmin, grid.h(a));
  out.margin_cells = std::max(2, static_cast<int>(std::ceil(margin / hmin - 1e-9)));

  auto log_phi = [&](const std::vector<double>& x) {
    if (model.min_separation(x) < model.epsilon_sing()) return -std::numeric_limits<double>::infinity();
    return model.jastrow_log(x);
  };

  std::vector<double> logs;
  double top = -std::numeric_limits<double>::infinity();
  for (const auto& t : lat.tuples()) {
    out.coords.push_back(lat.coords(t));
    logs.push_back(log_phi(out.coords.back()));
    top = std::max(top, logs.back());
  }
  double cell = 1.0;
  for (int a = 0; a < d; ++a) cell *= grid.h(a);
  double norm2 = 0.0;
  for (double l : logs) {
    out.values.push_back(std::exp(l - top));
    norm2 += out.values.back() * out.values.back() * cell;
  }
  for (double& v : out.values) v /= std::sqrt(norm2);

  double worst = 0.0;
  for (std::size_t i = 0; i < lat.tuples().size(); ++i) {
    const auto& t = lat.tuples()[i];
    int dist = std::numeric_limits<int>::max();
    for (int a = 0; a < d; ++a) {
      if (grid.boundary == Boundary::dirichlet) dist = std::min({dist, t[a] + 1, grid.axes[a].m - t[a]});
      if (grid.sector == Sector::ordered && a > 0) dist = std::min(dist, t[a] - t[a - 1]);
    }
    if (dist < out.margin_cells) continue;
    const std::vector<double>& x = out.coords[i];
    const double l0 = logs[i];
    double ratio = model.factorized_potential(x);
    for (int a = 0; a < d; ++a) {
      const double h = grid.h(a);
      double lap = centre_weight(stencil_order);
      for (const StencilTap& tap : taps) {
        std::vector<double> y = x;
        y[a] += tap.offset * h;
        lap += tap.weight * std::exp(log_phi(y) - l0);
      }
      ratio -= lap / (h * h);
    }
    worst = std::max(worst, std::abs(ratio));
  }
  out.grid_residual = worst;
  return out;
}

PartnerGroundState partner_ground_state(const NBodyModel& model) {
  PartnerGroundState out{model.shifted(), 0.0, true, {}};
  if (auto r = model.remainder()) {
    out.energy = *r;
  } else {
    out.energy = constant_fit_diagnostic(model).r_hat;
    out.warnings.push_back("remainder measured by fit; the quoted closed form is " +
                           format_double(model.harmonic_remainder_reference()));
  }
  normalizability_warnings(out.shifted, out.normalizable, out.warnings);
  return out;
}

// ---------------------------------------------------------------------------
// N = 2 reduction

double TwoBodyReduction::potential(double r) const {
  return kinetic_factor * (relative ? relative->potential(r) : inverse_square / (r * r));
}

double TwoBodyReduction::partner_potential(double r) const {
  return kinetic_factor * (relative ? relative->partner_potential(r) : inverse_square_partner / (r * r));
}

TwoBodyReduction two_body_reduction(const NBodyModel& model, int n_levels) {
  if (model.n() != 2) throw DimensionError("two_body_reduction needs N = 2");
  TwoBodyReduction out;
  const double a = model.alpha();
  std::ostringstream why;
  switch (model.kind()) {
    case ModelKind::calogero_sutherland:
      out.domain = {0.0, kPi};
      out.relative = make_prepotential_1d(Family1D::rosen_morse_trig, {a, 1.0});
      why << "w(r) = -" << format_double(a) << " cot r: rosen_morse(b=" << format_double(a) << ", a=1) on (0, pi)";
      out.bound = true;
      break;
    case ModelKind::harmonic_calogero:
      out.domain = {0.0, std::numeric_limits<double>::infinity()};
      out.relative = make_prepotential_1d(Family1D::rational_harmonic, {model.beta(), -a});
      why << "w(r) = " << format_double(model.beta()) << " r - " << format_double(a)
          << " / r: rational(a=beta, b=-alpha) on (0, inf)";
      out.bound = true;
      break;
    case ModelKind::calogero:
      out.domain = {0.0, std::numeric_limits<double>::infinity()};
      // W = -alpha / r has no confining term: continuous spectrum.
      out.inverse_square = a * (a - 1.0);
      out.inverse_square_partner = a * (a + 1.0);
      why << "w(r) = -" << format_double(a) << " / r: no ladder, continuous relative spectrum";
      break;
  }
  if (a == 0.0) {
    why.str("");
    why << "g = 0: free relative motion";
    out.relative.reset();
    out.inverse_square = out.inverse_square_partner = 0.0;
    out.bound = false;
  }
  why << "; H = (1/2) P^2 + 2 (-d_r^2 + w^2 - w')";
  out.mapping = why.str();
  if (out.bound && out.relative) {
    const SpectrumChain s = algebraic_spectrum(*out.relative, std::max(0, n_levels - 1));
    for (double e : s.energies) out.algebraic_levels.push_back(out.kinetic_factor * e);
  }
  return out;
}

double default_extent(const TwoBodyReduction& red) {
  if (std::isfinite(red.domain.hi)) return red.domain.hi;
  if (red.relative && red.relative->family() == Family1D::rational_harmonic && red.relative->param(0) > 0)
    return std::sqrt(80.0 / red.relative->param(0)) + 2.0;
  return 20.0;
}

namespace {

SparseHamiltonian reduced_matrix(const TwoBodyReduction& red, int m, double extent, bool partner) {
  const GridSpec g = interval_grid(red.domain.lo, std::min(red.domain.hi, extent), m);
  auto v = [&](const std::vector<double>& x) {
    return partner ? red.partner_potential(x[0]) : red.potential(x[0]);
  };
  return discretize(v, g, 4, red.kinetic_factor, std::string("reduced relative ") + (partner ? "partner" : "operator"));
}

double relative_error(double got, double want) { return std::abs(got - want) / std::max(1.0, std::abs(want)); }

}  // namespace

ReductionCheck reduction_spectrum_check(const TwoBodyReduction& red, int m, int k, std::optional<double> extent,
                                        const EigenOptions& opt) {
  if (!red.bound) throw DomainError("reduction has no discrete ladder to compare");
  if (k > static_cast<int>(red.algebraic_levels.size()))
    throw DimensionError("requested more levels than the algebraic chain carries");
  const SparseHamiltonian h = reduced_matrix(red, m, extent.value_or(default_extent(red)), false);
  const SpectrumResult s = eigen(h, k, opt);
  ReductionCheck out;
  out.grid = s.values;
  out.algebraic.assign(red.algebraic_levels.begin(), red.algebraic_levels.begin() + k);
  for (int i = 0; i < k; ++i) out.max_relative = std::max(out.max_relative, relative_error(out.grid[i], out.algebraic[i]));
  out.pass = out.max_relative < out.tolerance;
  return out;
}

double partner_grid_energy(const NBodyModel& model, int m, const EigenOptions& opt) {
  const TwoBodyReduction red = two_body_reduction(model, 1);
  if (!red.bound) throw DomainError("partner grid energy needs a confining model");
  const SparseHamiltonian h = reduced_matrix(red, m, default_extent(red), true);
  return eigen(h, 1, opt).values[0];
}

// ---------------------------------------------------------------------------
// Isospectrality

nlohmann::json to_json(const IsospectralityReport& r) {
  return {{"identity", "isospectrality"}, {"model", r.description}, {"partner", r.partner},
          {"shifted_plus_R", r.shifted},   {"remainder", r.remainder},  {"max_relative", r.max_relative},
          {"tolerance", r.tolerance},      {"pass", r.pass}};
}

namespace {

void compare(IsospectralityReport& r, const SpectrumResult& partner, const SpectrumResult& shifted) {
  r.partner = partner.values;
  r.shifted.clear();
  for (double v : shifted.values) r.shifted.push_back(v + r.remainder);
  r.max_relative = 0.0;
  for (std::size_t i = 0; i < r.partner.size(); ++i)
    r.max_relative = std::max(r.max_relative, relative_error(r.partner[i], r.shifted[i]));
  r.pass = r.max_relative < r.tolerance;
}

}  // namespace

IsospectralityReport isospectrality_check(const Prepotential1D& prep, const GridSpec& grid, int k,
                                          const EigenOptions& opt) {
  IsospectralityReport r;
  r.description = prep.describe();
  r.remainder = prep.remainder_next().value;
  const SparseHamiltonian hp = discretize(prep, grid, Form1D::partner);
  const SparseHamiltonian hs = discretize(prep.next(), grid, Form1D::potential);
  compare(r, eigen(hp, k, opt), eigen(hs, k, opt));
  return r;
}

IsospectralityReport isospectrality_check(const NBodyModel& model, const GridSpec& grid, int k,
                                          const EigenOptions& opt) {
  IsospectralityReport r;
  r.description = model.describe();
  r.remainder = partner_ground_state(model).energy;
  if (model.periodic()) {
    if (model.n() != 2) throw ConfigError("the periodic kind is checked on the grid for N = 2 only");
    const TwoBodyReduction red = two_body_reduction(model, 1);
    const TwoBodyReduction red1 = two_body_reduction(model.shifted(), 1);
    const int m = grid.axes.at(0).m;
    const SparseHamiltonian hp = reduced_matrix(red, m, kPi, true);
    const SparseHamiltonian hs = reduced_matrix(red1, m, kPi, false);
    compare(r, eigen(hp, k, opt), eigen(hs, k, opt));
    return r;
  }
  const SparseHamiltonian hp = discretize(model, grid, FormN::partner);
  const SparseHamiltonian hs = discretize(model.shifted(), grid, FormN::factorized);
  compare(r, eigen(hp, k, opt), eigen(hs, k, opt));
  return r;
}

}  // namespace shapeinv
