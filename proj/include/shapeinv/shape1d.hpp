#pragma once

// One-dimensional shape invariance: algebraic spectra from the parameter map,
// ground states, creation-operator chains on a grid, and the hierarchy
// H^(n)(a0) = H^(0)(a_n) + sum R(a_k).

#include <iosfwd>
#include <string>
#include <vector>

#include "shapeinv/models.hpp"

namespace shapeinv {

struct SpectrumChain {
  std::vector<std::vector<double>> params;  // a_0 ... a_n
  std::vector<double> energies;             // E_0 ... E_n, E_0 = 0
  std::vector<double> remainders;           // R(a_1) ... R(a_n)
  bool bound_ladder = true;
  bool degenerate = false;  // some step did not move the parameters
};

SpectrumChain algebraic_spectrum(const Prepotential1D& prep, int n_max);

enum class Boundary { dirichlet, periodic };

std::string to_string(Boundary b);
Boundary boundary_from_string(const std::string& name);

// Closed grid on [lo, hi] with M cells: nodes x_k = lo + k h, k = 0..M,
// h = (hi - lo) / M. Dirichlet functions carry zeros at both end nodes.
struct Grid1D {
  double lo = 0.0;
  double hi = 1.0;
  int cells = 512;
  double h() const { return (hi - lo) / cells; }
  double x(int k) const { return lo + k * h(); }
  int nodes() const { return cells + 1; }
};

struct GridFunction1D {
  double x_min = 0.0;
  double x_max = 0.0;
  Boundary boundary = Boundary::dirichlet;
  std::vector<double> x;
  std::vector<double> values;
  // Nodes within this many cells of either end are affected by one-sided
  // stencils and are not trusted.
  int boundary_margin = 0;
  bool normalizable = true;
  std::vector<std::string> warnings;

  int samples() const { return static_cast<int>(values.size()); }
  double h() const { return samples() > 1 ? x[1] - x[0] : 0.0; }
};

// Discrete L2 norm sqrt(h sum v^2) and inner product h sum u v.
double l2_norm(const GridFunction1D& f);
double inner(const GridFunction1D& a, const GridFunction1D& b);
void normalize(GridFunction1D& f);

// exp(-int W) sampled on the grid and normalized. Must lie in the natural
// domain. Non-normalizable ground states are returned with a warning.
GridFunction1D ground_state_1d(const Prepotential1D& prep, const Grid1D& grid);

// psi_n = A^dagger(a_0) ... A^dagger(a_{n-1}) psi_0(a_n), applying -d/dx + W
// with fourth-order stencils (one-sided at the two cells next to each end) and
// normalizing after every step.
inline constexpr int kMaxChainLength = 6;
GridFunction1D wavefunction_chain(const Prepotential1D& prep, int n, const Grid1D& grid,
                                  int n_max_chain = kMaxChainLength);

// Fourth-order first and second derivatives on a uniform grid (one-sided near
// the ends). Requires at least 6 samples.
std::vector<double> derivative1(const std::vector<double>& u, double h);
std::vector<double> derivative2(const std::vector<double>& u, double h);

// <psi, H psi> / <psi, psi> with H = -d^2 + prep.potential; end nodes where
// the potential is singular are skipped.
double rayleigh_quotient(const Prepotential1D& prep, const GridFunction1D& psi);

// Strict sign changes among interior samples, ignoring |v| below
// rel_threshold * max|v|.
int count_nodes(const GridFunction1D& psi, double rel_threshold = 1e-9);

struct HierarchyLevel {
  int n = 0;
  Prepotential1D prep;  // at a_n
  double e0 = 0.0;      // sum_{k <= n} R(a_k)
  // V^(n)(x) = prep.potential(x) + e0
  double potential(double x) const { return prep.potential(x) + e0; }
};

std::vector<HierarchyLevel> hierarchy(const Prepotential1D& prep, int n);

// Two-column "x value" text, one sample per line.
void write_two_column(std::ostream& os, const GridFunction1D& f);

}  // namespace shapeinv
