#pragma once

// Finite-difference Hamiltonians on small grids, a shift-invert Lanczos
// eigensolver, product ground states, and the partner/reduction cross-checks.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <json.hpp>

#include "shapeinv/models.hpp"
#include "shapeinv/shape1d.hpp"

namespace shapeinv {

enum class Sector { full, ordered };

std::string to_string(Sector s);
Sector sector_from_string(const std::string& name);

struct GridAxis {
  double min = 0.0;
  double max = 1.0;
  int m = 64;  // unknowns along the axis
};

// Dirichlet axes carry m interior nodes x_k = min + (k + 1) h with
// h = (max - min) / (m + 1); the walls at min and max are not unknowns.
// Periodic axes carry m nodes x_k = min + k h with h = (max - min) / m.
// The ordered sector keeps only x_1 < x_2 < ... (equal axes required); the
// coincidence hyperplanes become Dirichlet walls.
struct GridSpec {
  std::vector<GridAxis> axes;
  Boundary boundary = Boundary::dirichlet;
  Sector sector = Sector::full;

  int dimension() const { return static_cast<int>(axes.size()); }
  double h(int axis) const;
  double coordinate(int axis, int k) const;
  void validate() const;  // throws ConfigError
  std::string describe() const;
};

GridSpec interval_grid(double lo, double hi, int m, Boundary b = Boundary::dirichlet);
GridSpec cube_grid(int d, double lo, double hi, int m, Sector sector);

struct SparseHamiltonian {
  Eigen::SparseMatrix<double> matrix;  // symmetric, column major
  GridSpec grid;
  // Grid index tuple and coordinates of each unknown, row-major in the tuple.
  std::vector<std::vector<int>> index;
  std::vector<std::vector<double>> coords;
  double min_potential = 0.0;
  int stencil_order = 4;
  std::string description;

  int size() const { return static_cast<int>(matrix.rows()); }
  double norm_inf() const;
  // Lanczos shift below the spectrum: min potential minus one.
  double shift() const { return min_potential - 1.0; }
};

// kinetic * (-laplacian) + V on the grid.
SparseHamiltonian discretize(const std::function<double(const std::vector<double>&)>& potential,
                             const GridSpec& grid, int stencil_order = 4, double kinetic = 1.0,
                             std::string description = "custom");

// 1-D forms: A^dagger A (potential) or A A^dagger (partner).
enum class Form1D { potential, partner };
SparseHamiltonian discretize(const Prepotential1D& prep, const GridSpec& grid, Form1D form,
                             int stencil_order = 4);

// N-body forms: the Hamiltonian as written (constant included), sum A^dagger A,
// or sum A A^dagger. Singular kinds need the ordered sector. The periodic kind
// is only handled through two_body_reduction.
enum class FormN { direct, factorized, partner };
std::string to_string(FormN f);
SparseHamiltonian discretize(const NBodyModel& model, const GridSpec& grid, FormN form,
                             int stencil_order = 4);

enum class EigenMethod { automatic, dense, iterative };
EigenMethod eigen_method_from_string(const std::string& name);

struct EigenOptions {
  EigenMethod method = EigenMethod::automatic;
  std::uint64_t seed = 0;
  // Residual contract: |H v - lambda v| <= tolerance * |H|_inf.
  double tolerance = 1e-8;
  int max_restarts = 4;
  int dense_limit = 4000;
  std::optional<double> shift;  // defaults to SparseHamiltonian::shift()
};

struct SpectrumResult {
  std::vector<double> values;  // ascending
  Eigen::MatrixXd vectors;     // unit columns
  std::vector<double> residuals;
  double norm_estimate = 0.0;
  int iterations = 0;
  std::string method;
};

SpectrumResult eigen(const SparseHamiltonian& h, int k, const EigenOptions& opt = {});
SpectrumResult eigen(const Eigen::SparseMatrix<double>& h, int k, double shift,
                     const EigenOptions& opt = {});

// CSV with header "index,lambda,residual".
void write_spectrum_csv(std::ostream& os, const SpectrumResult& r);
// Text dump: "# key value" header lines (dimension, axes, m, sector, ordering),
// then one row per unknown: coordinates followed by the value.
void write_grid_dump(std::ostream& os, const SparseHamiltonian& h, const Eigen::VectorXd& values);

struct JastrowGroundState {
  std::vector<double> values;  // on the unknowns of the grid, unit discrete norm
  GridSpec grid;
  std::vector<std::vector<double>> coords;
  // Jet-based max relative residual of H Phi0 (exact derivatives).
  double jet_residual = 0.0;
  // max |(H Phi0) / Phi0| over nodes at least `margin` cells from every wall,
  // with H applied by the grid stencil to the closed form.
  double grid_residual = 0.0;
  int margin_cells = 2;
  bool normalizable = true;
  std::vector<std::string> warnings;
};

// margin: physical distance from walls below which nodes are skipped in the
// grid residual (never less than two cells).
JastrowGroundState jastrow_ground_state(const NBodyModel& model, const GridSpec& grid,
                                        int stencil_order = 4, double margin = 0.0,
                                        std::uint64_t seed = 0);

struct PartnerGroundState {
  NBodyModel shifted;
  double energy = 0.0;  // R(alpha + 1)
  bool normalizable = true;
  std::vector<std::string> warnings;
};

PartnerGroundState partner_ground_state(const NBodyModel& model);

struct TwoBodyReduction {
  // Relative operator kinetic * (-d^2/dr^2 + w^2 - w') with r = x_1 - x_2 and
  // w(r) = W_1; centre of mass (1/2) P^2.
  // Ladder family of w; empty for the plain Calogero pair (w = -alpha / r,
  // carried by the inverse-square coefficients) and for alpha = 0.
  std::optional<Prepotential1D> relative;
  double inverse_square = 0.0;          // w^2 - w' = inverse_square / r^2
  double inverse_square_partner = 0.0;  // w^2 + w'
  double kinetic_factor = 2.0;
  double cm_factor = 0.5;
  Interval domain{0.0, 0.0};
  bool bound = false;
  std::vector<double> algebraic_levels;  // kinetic * E_n from shape1d
  std::string mapping;

  double potential(double r) const;          // kinetic * (w^2 - w')
  double partner_potential(double r) const;  // kinetic * (w^2 + w')
};

TwoBodyReduction two_body_reduction(const NBodyModel& model, int n_levels = 4);

struct ReductionCheck {
  std::vector<double> grid;
  std::vector<double> algebraic;
  double max_relative = 0.0;
  double tolerance = 1e-3;
  bool pass = false;
};

// Grid spectrum of the reduced relative operator against the algebraic chain.
// The unbounded kinds are truncated at `extent`.
ReductionCheck reduction_spectrum_check(const TwoBodyReduction& red, int m, int k,
                                        std::optional<double> extent = std::nullopt,
                                        const EigenOptions& opt = {});

struct IsospectralityReport {
  std::string description;
  std::vector<double> partner;  // A A^dagger at alpha
  std::vector<double> shifted;  // A^dagger A at alpha + 1, plus R
  double remainder = 0.0;
  double max_relative = 0.0;
  double tolerance = 1e-3;
  bool pass = false;
};

nlohmann::json to_json(const IsospectralityReport& r);

IsospectralityReport isospectrality_check(const Prepotential1D& prep, const GridSpec& grid, int k,
                                          const EigenOptions& opt = {});
// The periodic kind is handled through the two-body reduction (N = 2 only);
// other kinds need an ordered-sector grid.
IsospectralityReport isospectrality_check(const NBodyModel& model, const GridSpec& grid, int k,
                                          const EigenOptions& opt = {});

// Reduced-grid check that the lowest partner level equals R (N = 2).
double partner_grid_energy(const NBodyModel& model, int m, const EigenOptions& opt = {});

// Default truncation of (0, inf) for the reduced harmonic problem.
double default_extent(const TwoBodyReduction& red);

}  // namespace shapeinv
