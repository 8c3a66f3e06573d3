#include "shapeinv/shape1d.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <ostream>

#include "shapeinv/errors.hpp"

namespace shapeinv {

SpectrumChain algebraic_spectrum(const Prepotential1D& prep, int n_max) {
  if (n_max < 0) throw DomainError("algebraic_spectrum: n_max must be >= 0");
  SpectrumChain chain;
  chain.bound_ladder = prep.has_bound_ladder();
  Prepotential1D cur = prep;
  chain.params.emplace_back(cur.params().begin(), cur.params().end());
  chain.energies.push_back(0.0);
  for (int k = 1; k <= n_max; ++k) {
    const Remainder r = cur.remainder_next();
    cur = cur.next();
    chain.degenerate = chain.degenerate || r.degenerate;
    chain.params.emplace_back(cur.params().begin(), cur.params().end());
    chain.remainders.push_back(r.value);
    chain.energies.push_back(chain.energies.back() + r.value);
  }
  return chain;
}

std::string to_string(Boundary b) { return b == Boundary::dirichlet ? "dirichlet" : "periodic"; }

Boundary boundary_from_string(const std::string& name) {
  if (name == "dirichlet") return Boundary::dirichlet;
  if (name == "periodic") return Boundary::periodic;
  throw ConfigError("unknown boundary: " + name);
}

double inner(const GridFunction1D& a, const GridFunction1D& b) {
  if (a.values.size() != b.values.size()) throw DimensionError("inner: grid size mismatch");
  double s = 0.0;
  for (std::size_t k = 0; k < a.values.size(); ++k) s += a.values[k] * b.values[k];
  return s * a.h();
}

double l2_norm(const GridFunction1D& f) { return std::sqrt(inner(f, f)); }

void normalize(GridFunction1D& f) {
  const double n = l2_norm(f);
  if (!(n > 0.0) || !std::isfinite(n)) throw DomainError("normalize: zero or non-finite norm");
  for (double& v : f.values) v /= n;
}

namespace {

void check_grid(const Grid1D& grid, const Prepotential1D& prep) {
  if (grid.cells < 8) throw DomainError("grid needs at least 8 cells");
  if (!(grid.hi > grid.lo)) throw DomainError("grid: hi must exceed lo");
  const Interval dom = prep.natural_domain();
  const double slack = 1e-12 * std::max(1.0, std::abs(grid.hi - grid.lo));
  if (grid.lo < dom.lo - slack || grid.hi > dom.hi + slack)
    throw DomainError("grid extends outside the natural domain of " + prep.describe());
}

GridFunction1D empty_function(const Grid1D& grid) {
  GridFunction1D f;
  f.x_min = grid.lo;
  f.x_max = grid.hi;
  f.boundary = Boundary::dirichlet;
  f.x.resize(grid.nodes());
  for (int k = 0; k < grid.nodes(); ++k) f.x[k] = grid.x(k);
  f.x.back() = grid.hi;
  f.values.assign(grid.nodes(), 0.0);
  return f;
}

// Finite W, or 0 where it is singular (those nodes carry Dirichlet zeros).
double safe_w(const Prepotential1D& prep, double x) {
  const double w = prep.W(x);
  return std::isfinite(w) ? w : 0.0;
}

constexpr std::array<double, 5> kD1Edge0{-25.0, 48.0, -36.0, 16.0, -3.0};
constexpr std::array<double, 5> kD1Edge1{-3.0, -10.0, 18.0, -6.0, 1.0};
constexpr std::array<double, 6> kD2Edge0{45.0, -154.0, 214.0, -156.0, 61.0, -10.0};
constexpr std::array<double, 6> kD2Edge1{10.0, -15.0, -4.0, 14.0, -6.0, 1.0};

template <std::size_t K>
double left_stencil(const std::array<double, K>& c, const std::vector<double>& u) {
  double s = 0.0;
  for (std::size_t j = 0; j < K; ++j) s += c[j] * u[j];
  return s;
}

template <std::size_t K>
double right_stencil(const std::array<double, K>& c, const std::vector<double>& u) {
  const std::size_t n = u.size();
  double s = 0.0;
  for (std::size_t j = 0; j < K; ++j) s += c[j] * u[n - 1 - j];
  return s;
}

}  // namespace

std::vector<double> derivative1(const std::vector<double>& u, double h) {
  const int n = static_cast<int>(u.size());
  if (n < 6) throw DimensionError("derivative1: need at least 6 samples");
  std::vector<double> d(n);
  for (int k = 2; k < n - 2; ++k)
    d[k] = (u[k - 2] - 8.0 * u[k - 1] + 8.0 * u[k + 1] - u[k + 2]) / (12.0 * h);
  d[0] = left_stencil(kD1Edge0, u) / (12.0 * h);
  d[1] = left_stencil(kD1Edge1, u) / (12.0 * h);
  d[n - 1] = -right_stencil(kD1Edge0, u) / (12.0 * h);
  d[n - 2] = -right_stencil(kD1Edge1, u) / (12.0 * h);
  return d;
}

std::vector<double> derivative2(const std::vector<double>& u, double h) {
  const int n = static_cast<int>(u.size());
  if (n < 6) throw DimensionError("derivative2: need at least 6 samples");
  const double h2 = 12.0 * h * h;
  std::vector<double> d(n);
  for (int k = 2; k < n - 2; ++k)
    d[k] = (-u[k - 2] + 16.0 * u[k - 1] - 30.0 * u[k] + 16.0 * u[k + 1] - u[k + 2]) / h2;
  d[0] = left_stencil(kD2Edge0, u) / h2;
  d[1] = left_stencil(kD2Edge1, u) / h2;
  d[n - 1] = right_stencil(kD2Edge0, u) / h2;
  d[n - 2] = right_stencil(kD2Edge1, u) / h2;
  return d;
}

GridFunction1D ground_state_1d(const Prepotential1D& prep, const Grid1D& grid) {
  check_grid(grid, prep);
  GridFunction1D f = empty_function(grid);
  bool bad = false;
  for (int k = 0; k < grid.nodes(); ++k) {
    const double v = prep.ground_state(f.x[k]);
    if (std::isfinite(v)) {
      f.values[k] = v;
    } else {
      bad = true;
    }
  }
  f.values.front() = 0.0;
  f.values.back() = 0.0;
  f.normalizable = prep.ground_state_normalizable();
  if (!f.normalizable)
    f.warnings.push_back("ground state of " + prep.describe() +
                         " is not normalizable (boundary exponent <= 1/2)");
  if (bad) f.warnings.push_back("ground state diverges at some grid nodes; set to zero");
  normalize(f);
  return f;
}

GridFunction1D wavefunction_chain(const Prepotential1D& prep, int n, const Grid1D& grid,
                                  int n_max_chain) {
  if (n < 0) throw DomainError("wavefunction_chain: n must be >= 0");
  if (n > n_max_chain)
    throw DomainError("wavefunction_chain: n exceeds the chain limit " +
                      std::to_string(n_max_chain));
  check_grid(grid, prep);
  std::vector<Prepotential1D> steps{prep};
  for (int k = 0; k < n; ++k) steps.push_back(steps.back().next());

  GridFunction1D f = ground_state_1d(steps[n], grid);
  const double h = grid.h();
  for (int k = n - 1; k >= 0; --k) {
    const std::vector<double> d = derivative1(f.values, h);
    for (int j = 0; j < grid.nodes(); ++j)
      f.values[j] = -d[j] + safe_w(steps[k], f.x[j]) * f.values[j];
    f.values.front() = 0.0;
    f.values.back() = 0.0;
    normalize(f);
  }
  f.boundary_margin = 2 * n;
  f.normalizable = prep.ground_state_normalizable() || steps[n].ground_state_normalizable();
  if (!prep.ground_state_normalizable())
    f.warnings.push_back("base parameters " + prep.describe() +
                         " are outside the normalizable regime");
  if (n > 0 && grid.cells < 512)
    f.warnings.push_back("chain on fewer than 512 cells; expect stencil error");
  return f;
}

double rayleigh_quotient(const Prepotential1D& prep, const GridFunction1D& psi) {
  const std::vector<double> d2 = derivative2(psi.values, psi.h());
  double num = 0.0, den = 0.0;
  for (int k = 0; k < psi.samples(); ++k) {
    den += psi.values[k] * psi.values[k];
    const double v = prep.potential(psi.x[k]);
    if (!std::isfinite(v)) continue;
    num += psi.values[k] * (-d2[k] + v * psi.values[k]);
  }
  return num / den;
}

int count_nodes(const GridFunction1D& psi, double rel_threshold) {
  double peak = 0.0;
  for (double v : psi.values) peak = std::max(peak, std::abs(v));
  const double cut = rel_threshold * peak;
  int nodes = 0, last = 0;
  for (int k = 1; k + 1 < psi.samples(); ++k) {
    const double v = psi.values[k];
    if (std::abs(v) <= cut) continue;
    const int s = v > 0 ? 1 : -1;
    if (last != 0 && s != last) ++nodes;
    last = s;
  }
  return nodes;
}

std::vector<HierarchyLevel> hierarchy(const Prepotential1D& prep, int n) {
  if (n < 0) throw DomainError("hierarchy: n must be >= 0");
  std::vector<HierarchyLevel> levels;
  levels.push_back({0, prep, 0.0});
  for (int k = 1; k <= n; ++k) {
    const HierarchyLevel& prev = levels.back();
    const Remainder r = prev.prep.remainder_next();
    levels.push_back({k, prev.prep.next(), prev.e0 + r.value});
  }
  return levels;
}

void write_two_column(std::ostream& os, const GridFunction1D& f) {
  const auto old = os.precision(17);
  for (int k = 0; k < f.samples(); ++k) os << f.x[k] << ' ' << f.values[k] << '\n';
  os.precision(old);
}

}  // namespace shapeinv
