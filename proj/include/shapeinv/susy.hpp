#pragma once

// Supersymmetric extension Q = sum_i A_i psi_i on a lattice.
//
// Fermions are taken in the Jacobi basis chi_a = sum_i O_ai psi_i (an
// orthogonal rotation, so the anticommutators are unchanged). Mode N-1 is the
// centre of mass; its A reduces to i kappa on Fourier modes exp(i kappa y_N).
// The relative directions live on a cubical lattice in the Jacobi relative
// coordinates, restricted to the ordered chamber. With G the product ground
// state sampled at cell centres, the relative part of Q is the conjugated
// difference
//   (B_a w)(c, S+a) = G(c, S+a) [w(c+e_a, S) / G(c+e_a, S) - w(c, S) / G(c, S)] / h,
// which approximates A_a = d_a + W_a, annihilates G exactly, and satisfies
// B_a B_b = B_b B_a, so Q^2 = 0 at matrix level. A Fock state s sits on the
// cells whose directions S(s) are the unoccupied relative modes (S1) or the
// occupied ones (S2, where Q uses B^T at alpha + 1).

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <json.hpp>

#include "shapeinv/models.hpp"
#include "shapeinv/spectral.hpp"
#include "shapeinv/verify.hpp"

namespace shapeinv {

using ComplexSparse = Eigen::SparseMatrix<std::complex<double>>;

// 2^N occupation states indexed by bitmask (bit i = mode i). psi_i acts with
// the sign (-1)^(number of occupied modes j < i).
class FockBasis {
 public:
  explicit FockBasis(int modes);
  int modes() const { return modes_; }
  int size() const { return 1 << modes_; }
  static int fermion_number(unsigned state);
  // (-1)^(occupied modes below i) for a state.
  static int string_sign(unsigned state, int i);
  Eigen::SparseMatrix<double> annihilation(int i) const;
  Eigen::SparseMatrix<double> creation(int i) const;
  Eigen::SparseMatrix<double> number() const;

 private:
  int modes_;
};

// Largest entry of {psi_i, psi_j^dagger} - delta_ij and {psi_i, psi_j} over all i, j.
double anticommutator_residual(const FockBasis& fock);

enum class Variant { s1, s2 };
std::string to_string(Variant v);
Variant variant_from_string(const std::string& name);

struct SusyGrid {
  int m = 64;        // lattice nodes per relative axis
  int cm_modes = 8;  // centre-of-mass Fourier modes m = -cm_modes/2 .. cm_modes/2 - 1
  // Half-width of the relative box for the non-periodic kinds.
  std::optional<double> extent;
  // Period of the centre-of-mass coordinate; sqrt(N) pi for the periodic kind.
  std::optional<double> cm_length;
};

inline constexpr int kSusySparseCap = 200000;

struct SusySystem {
  NBodyModel model;
  Variant variant = Variant::s1;
  SusyGrid grid;
  GridSpec relative_grid;  // bounding box of the chamber in Jacobi coordinates
  double cm_length = 0.0;

  ComplexSparse q;
  ComplexSparse q_dag;
  Eigen::SparseMatrix<double> h;  // Q^dagger Q + Q Q^dagger, real part
  double dropped_imaginary = 0.0;  // largest |Im H| entry discarded

  // Per basis vector: Fock state, fermion number, centre-of-mass mode, cell.
  std::vector<unsigned> fock_state;
  std::vector<int> fermions;
  std::vector<int> cm_mode;
  std::vector<int> cell;
  // Basis vectors are grouped by fermion number: sector F occupies
  // [sector_offset[F], sector_offset[F + 1]).
  std::vector<int> sector_offset;
  // Lattice cells per relative direction set (bitmask), as base index tuples.
  std::vector<std::vector<std::vector<int>>> cells;

  int size() const { return static_cast<int>(h.rows()); }
  int modes() const { return model.n(); }
  int sector_size(int f) const { return sector_offset[f + 1] - sector_offset[f]; }
  double kappa(int mode) const;
  // Index of (state, mode, cell), or -1.
  int find(unsigned state, int mode, int cell_index) const;

  // Bookkeeping for find().
  std::vector<int> block_offset;  // per (state, mode)
};

SusySystem build_susy(const NBodyModel& model, const SusyGrid& grid = {}, Variant variant = Variant::s1);

struct StructureReport {
  double q_squared = 0.0;           // Frobenius norm of Q^2
  double q_squared_relative = 0.0;  // / |Q|_F^2
  double commutator = 0.0;          // |[H, Q]|_F / (|H|_F |Q|_F)
  double commutator_dag = 0.0;
  long cross_sector_entries = 0;    // H entries between different fermion numbers
  double symmetry = 0.0;            // |H - H^T|_F / |H|_F
  double anticommutators = 0.0;
  double dropped_imaginary = 0.0;
};

StructureReport structure_check(const SusySystem& sys);

enum class KerTag { zero, ker_q, ker_qdag, mixed };
std::string to_string(KerTag t);

struct SectorSpectrum {
  int fermions = 0;
  int size = 0;
  bool complete = false;  // every eigenvalue of the block was computed
  std::vector<double> values;
  // Columns in the block basis; degenerate clusters are rotated so that each
  // column lies in ker Q or ker Q^dagger.
  Eigen::MatrixXcd vectors;
  std::vector<double> q_norm;
  std::vector<double> qdag_norm;
  std::vector<KerTag> tags;
};

struct SusySpectra {
  std::vector<SectorSpectrum> sectors;
  double zero_tolerance = 0.0;  // eigenvalues below this are zero modes
  double h_norm = 0.0;
};

// k <= 0 or blocks below the dense cap: full spectrum; otherwise the k lowest.
inline constexpr int kSusyDenseCap = 5000;
SusySpectra sector_spectra(const SusySystem& sys, int k = 0, const EigenOptions& opt = {});

struct KernelCounts {
  int fermions = 0;
  int zero = 0;
  int ker_q = 0;
  int ker_qdag = 0;
  int mixed = 0;
  double max_zero_mode_norm = 0.0;  // max of |Qv|, |Q^dagger v| over zero modes
};

struct KernelReport {
  std::vector<KernelCounts> sectors;
  int violations = 0;  // mixed states plus zero modes with norms >= 1e-8
  bool pass = false;
};

KernelReport kernel_classify(const SusySystem& sys, const SusySpectra& spectra);

struct PairingEntry {
  int lower = 0;  // sector F (ker Q part) against F + 1 (ker Q^dagger part)
  int count_lower = 0;
  int count_upper = 0;
  int compared = 0;
  double max_difference = 0.0;  // relative to max(1, lambda)
  bool pass = false;
};

struct PairingReport {
  std::vector<PairingEntry> entries;
  double tolerance = 1e-6;
  bool pass = false;
};

PairingReport pairing_check(const SusySpectra& spectra, double tolerance = 1e-6);

struct SumCheckItem {
  int fermions = 0;
  int index = 0;  // column in the sector spectrum
  double lambda = 0.0;
  double sum_norm = 0.0;  // |Phi| (or |X|) for a unit state
  double residual = 0.0;  // |H Phi - lambda Phi| / |Phi|
  std::string classification;  // vanishing, degenerate, violation
};

struct SectorSumReport {
  std::vector<SumCheckItem> items;
  // N = 3: phi = Q chi / sqrt(lambda) for 2-fermion states chi in ker Q^dagger,
  // i.e. phi_i proportional to sum eps_ijk A_j chi_k; distance of phi from the
  // 1-fermion ker Q eigenspace at the same eigenvalue.
  std::optional<double> epsilon_relation_residual;
  double tolerance = 1e-6;
  bool pass = false;
};

SectorSumReport sector_sum_check(const SusySystem& sys, const SusySpectra& spectra, int count = 3);

struct VariantComparison {
  double remainder = 0.0;
  std::vector<double> s1_zero, s2_zero_plus_r;  // lowest k of the 0-fermion blocks
  std::vector<double> s1_one, s2_one_plus_r;    // lowest k of the 1-fermion blocks
  double zero_block_difference = 0.0;           // max relative difference
  double one_block_distance = 0.0;              // max absolute difference
  double zero_tolerance = 1e-2;
  double distinct_threshold = 0.1;
  bool pass = false;
};

VariantComparison compare_variants(const NBodyModel& model, const SusyGrid& grid = {}, int k = 4);
ResidualReport to_report(const VariantComparison& c, const std::string& model);

struct SusyReport {
  StructureReport structure;
  KernelReport kernel;
  PairingReport pairing;
  SectorSumReport sums;
  std::vector<double> sector_minima;
};

SusyReport analyze(const SusySystem& sys, const SusySpectra& spectra);
nlohmann::json to_json(const SusyReport& r, const SusySystem& sys);

// CSV with header "sector,index,lambda,ker_tag".
void write_sector_csv(std::ostream& os, const SusySpectra& spectra);

}  // namespace shapeinv
