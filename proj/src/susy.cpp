#include "shapeinv/susy.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <unordered_map>

#include "shapeinv/calculus.hpp"
#include "shapeinv/errors.hpp"
#include "shapeinv/io.hpp"

namespace shapeinv {

namespace {
constexpr double kPi = std::numbers::pi;
using cd = std::complex<double>;
}  // namespace

// ---------------------------------------------------------------------------
// Fock space

FockBasis::FockBasis(int modes) : modes_(modes) {
  if (modes < 1 || modes > 16) throw DimensionError("FockBasis supports 1..16 modes");
}

int FockBasis::fermion_number(unsigned state) { return std::popcount(state); }

int FockBasis::string_sign(unsigned state, int i) {
  return std::popcount(state & ((1u << i) - 1u)) % 2 ? -1 : 1;
}

Eigen::SparseMatrix<double> FockBasis::annihilation(int i) const {
  if (i < 0 || i >= modes_) throw DimensionError("fermion mode out of range");
  std::vector<Eigen::Triplet<double>> t;
  for (unsigned s = 0; s < static_cast<unsigned>(size()); ++s)
    if (s & (1u << i)) t.emplace_back(static_cast<int>(s ^ (1u << i)), static_cast<int>(s), string_sign(s, i));
  Eigen::SparseMatrix<double> m(size(), size());
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

Eigen::SparseMatrix<double> FockBasis::creation(int i) const { return annihilation(i).transpose(); }

Eigen::SparseMatrix<double> FockBasis::number() const {
  Eigen::SparseMatrix<double> m(size(), size());
  for (int i = 0; i < modes_; ++i) m += creation(i) * annihilation(i);
  return m;
}

double anticommutator_residual(const FockBasis& fock) {
  const int n = fock.modes();
  Eigen::SparseMatrix<double> id(fock.size(), fock.size());
  id.setIdentity();
  double worst = 0.0;
  auto maxabs = [](const Eigen::SparseMatrix<double>& m) {
    double r = 0.0;
    for (int c = 0; c < m.outerSize(); ++c)
      for (Eigen::SparseMatrix<double>::InnerIterator it(m, c); it; ++it) r = std::max(r, std::abs(it.value()));
    return r;
  };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const auto a = fock.annihilation(i), b = fock.annihilation(j), bd = fock.creation(j);
      Eigen::SparseMatrix<double> mixed = a * bd + bd * a;
      if (i == j) mixed -= id;
      const Eigen::SparseMatrix<double> same = a * b + b * a;
      worst = std::max({worst, maxabs(mixed), maxabs(same)});
    }
  return worst;
}

std::string to_string(Variant v) { return v == Variant::s1 ? "s1" : "s2"; }

Variant variant_from_string(const std::string& name) {
  if (name == "s1" || name == "S1") return Variant::s1;
  if (name == "s2" || name == "S2") return Variant::s2;
  throw ConfigError("unknown variant: " + name + " (expected s1, s2 or both)");
}

std::string to_string(KerTag t) {
  switch (t) {
    case KerTag::zero: return "zero";
    case KerTag::ker_q: return "kerQ";
    case KerTag::ker_qdag: return "kerQdag";
    case KerTag::mixed: return "mixed";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Assembly

double SusySystem::kappa(int mode) const {
  const int m = mode - grid.cm_modes / 2;
  return 2.0 * kPi * m / cm_length;
}

int SusySystem::find(unsigned state, int mode, int cell_index) const {
  const int b = block_offset[state * grid.cm_modes + mode];
  return b < 0 ? -1 : b + cell_index;
}

namespace {

struct CellTable {
  std::vector<std::vector<int>> base;
  std::vector<double> log_g;
  std::unordered_map<std::int64_t, int> index;
};

class RelativeLattice {
 public:
  RelativeLattice(const NBodyModel& model, const SusyGrid& grid) : model_(model), d_(model.n() - 1), m_(grid.m) {
    if (grid.m < 8) throw ConfigError("susy lattice needs m >= 8");
    if (grid.cm_modes < 1) throw ConfigError("susy needs at least one centre-of-mass mode");
    o_ = jacobi_matrix(model.n());
    lo_.assign(d_, 0.0);
    hi_.assign(d_, 0.0);
    if (model.periodic()) {
      // Bounding box of the alcove x_1 <= ... <= x_N <= x_1 + pi.
      for (int a = 0; a < d_; ++a) {
        lo_[a] = std::numeric_limits<double>::infinity();
        hi_[a] = -lo_[a];
      }
      for (int j = 0; j < model.n(); ++j) {
        Eigen::VectorXd v = Eigen::VectorXd::Zero(model.n());
        for (int i = model.n() - j; i < model.n(); ++i) v[i] = kPi;
        const Eigen::VectorXd y = o_ * v;
        for (int a = 0; a < d_; ++a) {
          lo_[a] = std::min(lo_[a], y[a]);
          hi_[a] = std::max(hi_[a], y[a]);
        }
      }
    } else {
      double ext = grid.extent.value_or(0.0);
      if (!grid.extent) ext = model.kind() == ModelKind::harmonic_calogero ? std::sqrt(40.0 / model.beta()) : 4.0;
      if (!(ext > 0.0)) throw ConfigError("susy extent must be positive");
      for (int a = 0; a < d_; ++a) {
        lo_[a] = -ext;
        hi_[a] = ext;
      }
    }
    nodes_ = 1;
    for (int a = 0; a < d_; ++a) nodes_ *= m_;
    exists_.assign(nodes_, 0);
    std::vector<int> t(d_, 0);
    for (long k = 0; k < nodes_; ++k) {
      unflatten(k, t);
      std::vector<double> off(d_, 0.5);
      exists_[k] = in_chamber(position(t, off)) ? 1 : 0;
    }
  }

  int d() const { return d_; }
  double h(int a) const { return (hi_[a] - lo_[a]) / m_; }
  GridSpec spec() const {
    GridSpec g;
    for (int a = 0; a < d_; ++a) g.axes.push_back({lo_[a], hi_[a], m_});
    return g;
  }

  // Cells spanned by the directions in mask S.
  CellTable cells(unsigned mask, const NBodyModel& phi_model) const {
    CellTable tab;
    std::vector<int> t(d_, 0);
    for (long k = 0; k < nodes_; ++k) {
      unflatten(k, t);
      bool ok = true;
      for (int a = 0; a < d_ && ok; ++a)
        if ((mask >> a & 1u) && t[a] + 1 >= m_) ok = false;
      if (!ok) continue;
      // every corner must be a chamber node
      for (unsigned sub = mask;; sub = (sub - 1) & mask) {
        std::vector<int> c = t;
        for (int a = 0; a < d_; ++a)
          if (sub >> a & 1u) ++c[a];
        if (!exists_[flatten(c)]) {
          ok = false;
          break;
        }
        if (sub == 0) break;
      }
      if (!ok) continue;
      std::vector<double> off(d_);
      for (int a = 0; a < d_; ++a) off[a] = (mask >> a & 1u) ? 1.0 : 0.5;
      const std::vector<double> x = position(t, off);
      tab.index.emplace(flatten(t), static_cast<int>(tab.base.size()));
      tab.base.push_back(t);
      tab.log_g.push_back(phi_model.jastrow_log(x));
    }
    return tab;
  }

  long flatten(const std::vector<int>& t) const {
    long k = 0;
    for (int a = 0; a < d_; ++a) k = k * m_ + t[a];
    return k;
  }

 private:
  void unflatten(long k, std::vector<int>& t) const {
    for (int a = d_ - 1; a >= 0; --a) {
      t[a] = static_cast<int>(k % m_);
      k /= m_;
    }
  }

  // Particle coordinates (centre of mass at 0) of the lattice point t + off.
  std::vector<double> position(const std::vector<int>& t, const std::vector<double>& off) const {
    Eigen::VectorXd y = Eigen::VectorXd::Zero(model_.n());
    for (int a = 0; a < d_; ++a) y[a] = lo_[a] + (t[a] + off[a]) * h(a);
    const Eigen::VectorXd x = o_.transpose() * y;
    return {x.data(), x.data() + x.size()};
  }

  bool in_chamber(const std::vector<double>& x) const {
    for (std::size_t i = 0; i + 1 < x.size(); ++i)
      if (!(x[i] < x[i + 1])) return false;
    if (model_.periodic() && !(x.back() - x.front() < kPi)) return false;
    return model_.min_separation(x) >= model_.epsilon_sing();
  }

  const NBodyModel& model_;
  int d_;
  int m_;
  Eigen::MatrixXd o_;
  std::vector<double> lo_, hi_;
  long nodes_ = 0;
  std::vector<char> exists_;
};

}  // namespace

SusySystem build_susy(const NBodyModel& model, const SusyGrid& grid, Variant variant) {
  const int n = model.n();
  if (n > 6) throw DimensionError("susy lattice supports N <= 6");
  const int d = n - 1;
  const unsigned cm_bit = 1u << d;
  const unsigned rel_all = cm_bit - 1u;
  const RelativeLattice lat(model, grid);
  const NBodyModel phi_model = variant == Variant::s1 ? model : model.shifted();

  SusySystem sys{model, variant, grid, lat.spec(), 0.0, {}, {}, {}, 0.0, {}, {}, {}, {}, {}, {}, {}};
  sys.cm_length = grid.cm_length.value_or(model.periodic() ? std::sqrt(double(n)) * kPi
                                                           : 2.0 * std::sqrt(double(n)) * lat.spec().axes[0].max);

  std::vector<CellTable> tables(1u << d);
  for (unsigned mask = 0; mask <= rel_all; ++mask) tables[mask] = lat.cells(mask, phi_model);
  auto dirs = [&](unsigned state) { return variant == Variant::s1 ? (~state & rel_all) : (state & rel_all); };

  const int cm = grid.cm_modes;
  const unsigned nstates = 1u << n;
  std::vector<unsigned> order(nstates);
  for (unsigned s = 0; s < nstates; ++s) order[s] = s;
  std::stable_sort(order.begin(), order.end(),
                   [](unsigned a, unsigned b) { return std::popcount(a) < std::popcount(b); });

  long total = 0;
  for (unsigned s : order) total += static_cast<long>(cm) * tables[dirs(s)].base.size();
  if (total > kSusySparseCap)
    throw DimensionError("susy dimension " + std::to_string(total) + " exceeds the cap " +
                         std::to_string(kSusySparseCap));

  sys.block_offset.assign(nstates * cm, -1);
  sys.sector_offset.assign(n + 2, 0);
  int next = 0;
  for (unsigned s : order) {
    const int cells = static_cast<int>(tables[dirs(s)].base.size());
    for (int md = 0; md < cm; ++md) {
      sys.block_offset[s * cm + md] = next;
      for (int c = 0; c < cells; ++c) {
        sys.fock_state.push_back(s);
        sys.fermions.push_back(std::popcount(s));
        sys.cm_mode.push_back(md);
        sys.cell.push_back(c);
      }
      next += cells;
    }
    sys.sector_offset[std::popcount(s) + 1] = next;
  }
  for (int f = 1; f <= n + 1; ++f) sys.sector_offset[f] = std::max(sys.sector_offset[f], sys.sector_offset[f - 1]);
  for (unsigned mask = 0; mask <= rel_all; ++mask) sys.cells.push_back(tables[mask].base);

  std::vector<Eigen::Triplet<cd>> trip;
  for (unsigned s = 0; s < nstates; ++s) {
    for (int a = 0; a < n; ++a) {
      if (!(s & (1u << a))) continue;
      const unsigned t = s ^ (1u << a);
      const double sign = FockBasis::string_sign(s, a);
      for (int md = 0; md < cm; ++md) {
        if (a == d) {
          const cd coef = (variant == Variant::s1 ? cd(0, 1) : cd(0, -1)) * sys.kappa(md);
          if (coef == cd(0, 0)) continue;
          const int cells = static_cast<int>(tables[dirs(s)].base.size());
          for (int c = 0; c < cells; ++c) trip.emplace_back(sys.find(t, md, c), sys.find(s, md, c), sign * coef);
          continue;
        }
        const double h = lat.h(a);
        // S1: B_a maps cells of S(s) to cells of S(s) + a.
        // S2: B_a^T maps cells of S(s) to cells of S(s) - a.
        const unsigned big = variant == Variant::s1 ? dirs(t) : dirs(s);
        const unsigned small = big ^ (1u << a);
        const CellTable& tb = tables[big];
        const CellTable& ts = tables[small];
        for (std::size_t j = 0; j < tb.base.size(); ++j) {
          std::vector<int> c = tb.base[j];
          const int lo = ts.index.at(lat.flatten(c));
          ++c[a];
          const int hi = ts.index.at(lat.flatten(c));
          const double up = std::exp(tb.log_g[j] - ts.log_g[hi]) / h;
          const double dn = -std::exp(tb.log_g[j] - ts.log_g[lo]) / h;
          const int jj = static_cast<int>(j);
          if (variant == Variant::s1) {
            trip.emplace_back(sys.find(t, md, jj), sys.find(s, md, hi), sign * up);
            trip.emplace_back(sys.find(t, md, jj), sys.find(s, md, lo), sign * dn);
          } else {
            trip.emplace_back(sys.find(t, md, hi), sys.find(s, md, jj), sign * up);
            trip.emplace_back(sys.find(t, md, lo), sys.find(s, md, jj), sign * dn);
          }
        }
      }
    }
  }
  sys.q.resize(total, total);
  sys.q.setFromTriplets(trip.begin(), trip.end());
  sys.q.makeCompressed();
  sys.q_dag = sys.q.adjoint();
  const ComplexSparse hc = ComplexSparse(sys.q_dag * sys.q) + ComplexSparse(sys.q * sys.q_dag);
  std::vector<Eigen::Triplet<double>> real;
  for (int c = 0; c < hc.outerSize(); ++c)
    for (ComplexSparse::InnerIterator it(hc, c); it; ++it) {
      sys.dropped_imaginary = std::max(sys.dropped_imaginary, std::abs(it.value().imag()));
      if (it.value().real() != 0.0) real.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value().real());
    }
  sys.h.resize(total, total);
  sys.h.setFromTriplets(real.begin(), real.end());
  sys.h.makeCompressed();
  return sys;
}

// ---------------------------------------------------------------------------
// Structure

StructureReport structure_check(const SusySystem& sys) {
  StructureReport r;
  const ComplexSparse q2 = sys.q * sys.q;
  const double qn = sys.q.norm();
  r.q_squared = q2.norm();
  r.q_squared_relative = qn > 0 ? r.q_squared / (qn * qn) : 0.0;
  const ComplexSparse hc = sys.h.cast<cd>();
  const double hn = sys.h.norm();
  const ComplexSparse c1 = ComplexSparse(hc * sys.q) - ComplexSparse(sys.q * hc);
  const ComplexSparse c2 = ComplexSparse(hc * sys.q_dag) - ComplexSparse(sys.q_dag * hc);
  r.commutator = qn > 0 ? c1.norm() / (hn * qn) : 0.0;
  r.commutator_dag = qn > 0 ? c2.norm() / (hn * qn) : 0.0;
  for (int c = 0; c < sys.h.outerSize(); ++c)
    for (Eigen::SparseMatrix<double>::InnerIterator it(sys.h, c); it; ++it)
      if (it.value() != 0.0 && sys.fermions[it.row()] != sys.fermions[it.col()]) ++r.cross_sector_entries;
  const Eigen::SparseMatrix<double> ht = sys.h.transpose();
  r.symmetry = hn > 0 ? Eigen::SparseMatrix<double>(sys.h - ht).norm() / hn : 0.0;
  r.anticommutators = anticommutator_residual(FockBasis(sys.modes()));
  r.dropped_imaginary = sys.dropped_imaginary;
  return r;
}

// ---------------------------------------------------------------------------
// Sector spectra

namespace {

double norm_inf(const Eigen::SparseMatrix<double>& m) {
  Eigen::VectorXd rows = Eigen::VectorXd::Zero(m.rows());
  for (int c = 0; c < m.outerSize(); ++c)
    for (Eigen::SparseMatrix<double>::InnerIterator it(m, c); it; ++it) rows[it.row()] += std::abs(it.value());
  return rows.size() ? rows.maxCoeff() : 0.0;
}

Eigen::SparseMatrix<double> block(const SusySystem& sys, int f) {
  const int off = sys.sector_offset[f], n = sys.sector_size(f);
  return sys.h.block(off, off, n, n);
}

constexpr double kClusterTol = 1e-8;
constexpr double kKernelTol = 1e-6;

}  // namespace

SusySpectra sector_spectra(const SusySystem& sys, int k, const EigenOptions& opt) {
  SusySpectra out;
  out.h_norm = norm_inf(sys.h);
  out.zero_tolerance = 1e-8 * std::max(1.0, out.h_norm);
  for (int f = 0; f <= sys.modes(); ++f) {
    SectorSpectrum sp;
    sp.fermions = f;
    sp.size = sys.sector_size(f);
    if (sp.size == 0) {
      sp.complete = true;
      out.sectors.push_back(sp);
      continue;
    }
    const Eigen::SparseMatrix<double> b = block(sys, f);
    Eigen::MatrixXd vecs;
    if (sp.size <= kSusyDenseCap) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es{Eigen::MatrixXd(b)};
      const int keep = (k <= 0 || k >= sp.size) ? sp.size : k;
      sp.complete = keep == sp.size;
      sp.values.assign(es.eigenvalues().data(), es.eigenvalues().data() + keep);
      vecs = es.eigenvectors().leftCols(keep);
    } else {
      if (k <= 0) throw DimensionError("sector block too large for a full spectrum; pass k > 0");
      EigenOptions o = opt;
      o.method = EigenMethod::iterative;
      const SpectrumResult r = eigen(b, std::min(k, sp.size - 1), -1.0, o);
      sp.values = r.values;
      vecs = r.vectors;
    }
    const int cnt = static_cast<int>(sp.values.size());
    sp.vectors = vecs.cast<cd>();
    sp.q_norm.assign(cnt, 0.0);
    sp.qdag_norm.assign(cnt, 0.0);
    sp.tags.assign(cnt, KerTag::mixed);
    const int off = sys.sector_offset[f];
    const ComplexSparse qb = sys.q.middleCols(off, sp.size);
    const ComplexSparse qdb = sys.q_dag.middleCols(off, sp.size);
    for (int i = 0; i < cnt;) {
      int j = i + 1;
      while (j < cnt && sp.values[j] - sp.values[j - 1] <= kClusterTol * std::max(1.0, std::abs(sp.values[j - 1]))) ++j;
      const bool zero = sp.values[i] <= out.zero_tolerance;
      if (!zero) {
        const Eigen::MatrixXcd x = qb * sp.vectors.middleCols(i, j - i);
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(x, Eigen::ComputeThinV);
        sp.vectors.middleCols(i, j - i) = Eigen::MatrixXcd(sp.vectors.middleCols(i, j - i) * svd.matrixV());
      }
      for (int c = i; c < j; ++c) {
        const Eigen::VectorXcd v = sp.vectors.col(c);
        sp.q_norm[c] = (qb * v).norm();
        sp.qdag_norm[c] = (qdb * v).norm();
        if (zero) {
          sp.tags[c] = KerTag::zero;
          continue;
        }
        const double s = std::sqrt(sp.values[c]);
        const bool kq = sp.q_norm[c] < kKernelTol * s, kqd = sp.qdag_norm[c] < kKernelTol * s;
        sp.tags[c] = kq && !kqd ? KerTag::ker_q : (kqd && !kq ? KerTag::ker_qdag : KerTag::mixed);
      }
      i = j;
    }
    out.sectors.push_back(std::move(sp));
  }
  return out;
}

KernelReport kernel_classify(const SusySystem& sys, const SusySpectra& spectra) {
  (void)sys;
  KernelReport r;
  for (const SectorSpectrum& sp : spectra.sectors) {
    KernelCounts c;
    c.fermions = sp.fermions;
    for (std::size_t i = 0; i < sp.tags.size(); ++i) {
      switch (sp.tags[i]) {
        case KerTag::zero:
          ++c.zero;
          c.max_zero_mode_norm = std::max({c.max_zero_mode_norm, sp.q_norm[i], sp.qdag_norm[i]});
          break;
        case KerTag::ker_q: ++c.ker_q; break;
        case KerTag::ker_qdag: ++c.ker_qdag; break;
        case KerTag::mixed: ++c.mixed; break;
      }
    }
    r.violations += c.mixed;
    if (c.zero > 0 && !(c.max_zero_mode_norm < 1e-8)) ++r.violations;
    r.sectors.push_back(c);
  }
  r.pass = r.violations == 0;
  return r;
}

PairingReport pairing_check(const SusySpectra& spectra, double tolerance) {
  PairingReport r;
  r.tolerance = tolerance;
  r.pass = true;
  for (std::size_t f = 0; f + 1 < spectra.sectors.size(); ++f) {
    const SectorSpectrum& lo = spectra.sectors[f];
    const SectorSpectrum& up = spectra.sectors[f + 1];
    std::vector<double> a, b;
    for (std::size_t i = 0; i < lo.values.size(); ++i)
      if (lo.tags[i] == KerTag::ker_q) a.push_back(lo.values[i]);
    for (std::size_t i = 0; i < up.values.size(); ++i)
      if (up.tags[i] == KerTag::ker_qdag) b.push_back(up.values[i]);
    PairingEntry e;
    e.lower = static_cast<int>(f);
    e.count_lower = static_cast<int>(a.size());
    e.count_upper = static_cast<int>(b.size());
    bool counts_ok = true;
    if (lo.complete && up.complete) {
      e.compared = static_cast<int>(std::min(a.size(), b.size()));
      counts_ok = a.size() == b.size();
    } else {
      const double inf = std::numeric_limits<double>::infinity();
      const double cut = std::min(lo.values.empty() ? inf : lo.values.back(), up.values.empty() ? inf : up.values.back());
      const auto below = [&](const std::vector<double>& v) {
        return static_cast<int>(std::upper_bound(v.begin(), v.end(), cut) - v.begin());
      };
      e.compared = std::min(below(a), below(b));
    }
    for (int i = 0; i < e.compared; ++i)
      e.max_difference = std::max(e.max_difference, std::abs(a[i] - b[i]) / std::max(1.0, std::abs(a[i])));
    e.pass = counts_ok && e.max_difference <= tolerance;
    r.pass = r.pass && e.pass;
    r.entries.push_back(e);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Sector sums

namespace {

// Full-space vector of a sector column.
Eigen::VectorXcd embed(const SusySystem& sys, int f, const Eigen::VectorXcd& v) {
  Eigen::VectorXcd full = Eigen::VectorXcd::Zero(sys.size());
  full.segment(sys.sector_offset[f], v.size()) = v;
  return full;
}

// sqrt(N) times the components on `from`, moved onto the Fock state `to`
// (which sits on the same cells).
Eigen::VectorXcd move_component(const SusySystem& sys, const Eigen::VectorXcd& full, unsigned from, unsigned to) {
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(sys.size());
  const double scale = std::sqrt(static_cast<double>(sys.modes()));
  for (int i = 0; i < sys.size(); ++i) {
    if (sys.fock_state[i] != from) continue;
    out[sys.find(to, sys.cm_mode[i], sys.cell[i])] = scale * full[i];
  }
  return out;
}

SumCheckItem classify_sum(const SusySystem& sys, int f, int index, double lambda, const Eigen::VectorXcd& sum,
                          double tol) {
  SumCheckItem it;
  it.fermions = f;
  it.index = index;
  it.lambda = lambda;
  it.sum_norm = sum.norm();
  if (it.sum_norm < tol) {
    it.classification = "vanishing";
    return it;
  }
  const Eigen::VectorXcd hv = sys.h.cast<cd>() * sum;
  it.residual = (hv - lambda * sum).norm() / it.sum_norm;
  it.classification = it.residual < tol ? "degenerate" : "violation";
  return it;
}

}  // namespace

SectorSumReport sector_sum_check(const SusySystem& sys, const SusySpectra& spectra, int count) {
  SectorSumReport r;
  const int n = sys.modes();
  const unsigned full = (1u << n) - 1u;
  const unsigned cm_bit = 1u << (n - 1);
  auto run = [&](int f, bool want_ker_q, unsigned from, unsigned to) {
    const SectorSpectrum& sp = spectra.sectors.at(f);
    int done = 0;
    for (std::size_t i = 0; i < sp.values.size() && done < count; ++i) {
      const KerTag t = sp.tags[i];
      if (t != KerTag::zero && t != (want_ker_q ? KerTag::ker_q : KerTag::ker_qdag)) continue;
      const Eigen::VectorXcd v = embed(sys, f, sp.vectors.col(static_cast<Eigen::Index>(i)));
      r.items.push_back(classify_sum(sys, f, static_cast<int>(i), sp.values[i], move_component(sys, v, from, to), r.tolerance));
      ++done;
    }
  };
  // 1-fermion states in ker Q: Phi = sum_i phi_i = sqrt(N) times the
  // centre-of-mass component, compared with the 0-fermion block.
  run(1, true, cm_bit, 0u);
  // (N-1)-fermion states in ker Q^dagger: X = sum_i chi_i, compared with the
  // N-fermion block.
  run(n - 1, false, full ^ cm_bit, full);

  if (n == 3) {
    const SectorSpectrum& two = spectra.sectors[2];
    const SectorSpectrum& one = spectra.sectors[1];
    double worst = 0.0;
    int done = 0;
    for (std::size_t i = 0; i < two.values.size() && done < count; ++i) {
      if (two.tags[i] != KerTag::ker_qdag) continue;
      const double lam = two.values[i];
      const Eigen::VectorXcd v = embed(sys, 2, two.vectors.col(static_cast<Eigen::Index>(i)));
      Eigen::VectorXcd phi = (sys.q * v) / std::sqrt(lam);
      phi = phi.segment(sys.sector_offset[1], sys.sector_size(1)).eval();
      Eigen::VectorXcd rest = phi;
      for (std::size_t j = 0; j < one.values.size(); ++j) {
        if (one.tags[j] != KerTag::ker_q) continue;
        if (std::abs(one.values[j] - lam) > kKernelTol * std::max(1.0, lam)) continue;
        const Eigen::VectorXcd u = one.vectors.col(static_cast<Eigen::Index>(j));
        rest -= u * u.dot(phi);
      }
      worst = std::max(worst, rest.norm() / std::max(phi.norm(), 1e-300));
      ++done;
    }
    r.epsilon_relation_residual = worst;
  }
  r.pass = std::none_of(r.items.begin(), r.items.end(), [](const SumCheckItem& it) { return it.classification == "violation"; });
  if (r.epsilon_relation_residual && !(*r.epsilon_relation_residual < r.tolerance)) r.pass = false;
  return r;
}

// ---------------------------------------------------------------------------
// Variants

namespace {

std::vector<double> lowest(const SusySystem& sys, int f, int k) {
  const Eigen::SparseMatrix<double> b = block(sys, f);
  EigenOptions o;
  if (b.rows() <= kSusyDenseCap) o.method = EigenMethod::dense;
  return eigen(b, std::min<int>(k, static_cast<int>(b.rows()) - 1), -1.0, o).values;
}

}  // namespace

VariantComparison compare_variants(const NBodyModel& model, const SusyGrid& grid, int k) {
  VariantComparison c;
  const SusySystem s1 = build_susy(model, grid, Variant::s1);
  const SusySystem s2 = build_susy(model, grid, Variant::s2);
  c.remainder = partner_ground_state(model).energy;
  c.s1_zero = lowest(s1, 0, k);
  c.s1_one = lowest(s1, 1, k);
  for (double v : lowest(s2, 0, k)) c.s2_zero_plus_r.push_back(v + c.remainder);
  for (double v : lowest(s2, 1, k)) c.s2_one_plus_r.push_back(v + c.remainder);
  for (std::size_t i = 0; i < c.s1_zero.size() && i < c.s2_zero_plus_r.size(); ++i)
    c.zero_block_difference = std::max(c.zero_block_difference,
                                       std::abs(c.s1_zero[i] - c.s2_zero_plus_r[i]) / std::max(1.0, std::abs(c.s1_zero[i])));
  for (std::size_t i = 0; i < c.s1_one.size() && i < c.s2_one_plus_r.size(); ++i)
    c.one_block_distance = std::max(c.one_block_distance, std::abs(c.s1_one[i] - c.s2_one_plus_r[i]));
  c.pass = c.zero_block_difference <= c.zero_tolerance && c.one_block_distance > c.distinct_threshold;
  return c;
}

ResidualReport to_report(const VariantComparison& c, const std::string& model) {
  ResidualReport r;
  r.identity = "susy_variants";
  r.model = model;
  r.trials = static_cast<int>(c.s1_zero.size());
  r.max_residual = c.zero_block_difference;
  r.mean_residual = c.zero_block_difference;
  r.tolerance = c.zero_tolerance;
  r.pass = c.pass;
  r.details["remainder"] = c.remainder;
  r.details["one_block_distance"] = c.one_block_distance;
  r.details["distinct_threshold"] = c.distinct_threshold;
  for (std::size_t i = 0; i < c.s1_zero.size(); ++i) {
    r.details["s1_zero_" + std::to_string(i)] = c.s1_zero[i];
    r.details["s2_zero_plus_r_" + std::to_string(i)] = c.s2_zero_plus_r[i];
  }
  for (std::size_t i = 0; i < c.s1_one.size(); ++i) {
    r.details["s1_one_" + std::to_string(i)] = c.s1_one[i];
    r.details["s2_one_plus_r_" + std::to_string(i)] = c.s2_one_plus_r[i];
  }
  r.notes["comparison"] = "0-fermion blocks: S1 against S2 + R; 1-fermion blocks must differ";
  return r;
}

// ---------------------------------------------------------------------------
// Reports

SusyReport analyze(const SusySystem& sys, const SusySpectra& spectra) {
  SusyReport r;
  r.structure = structure_check(sys);
  r.kernel = kernel_classify(sys, spectra);
  r.pairing = pairing_check(spectra);
  r.sums = sector_sum_check(sys, spectra);
  for (const SectorSpectrum& sp : spectra.sectors)
    r.sector_minima.push_back(sp.values.empty() ? std::numeric_limits<double>::quiet_NaN() : sp.values[0]);
  return r;
}

nlohmann::json to_json(const SusyReport& r, const SusySystem& sys) {
  using nlohmann::json;
  json j;
  j["model"] = sys.model.describe();
  j["variant"] = to_string(sys.variant);
  j["grid"] = {{"m", sys.grid.m}, {"cm_modes", sys.grid.cm_modes}, {"cm_length", sys.cm_length},
               {"relative", sys.relative_grid.describe()}, {"dimension", sys.size()}};
  const StructureReport& s = r.structure;
  j["structure"] = {{"q_squared", s.q_squared},
                    {"q_squared_relative", s.q_squared_relative},
                    {"commutator_h_q", s.commutator},
                    {"commutator_h_qdag", s.commutator_dag},
                    {"cross_sector_entries", s.cross_sector_entries},
                    {"symmetry", s.symmetry},
                    {"anticommutators", s.anticommutators},
                    {"dropped_imaginary", s.dropped_imaginary}};
  j["sector_minima"] = r.sector_minima;
  json kc = json::array();
  for (const KernelCounts& c : r.kernel.sectors)
    kc.push_back({{"fermions", c.fermions}, {"zero", c.zero}, {"ker_q", c.ker_q}, {"ker_qdag", c.ker_qdag},
                  {"mixed", c.mixed}, {"max_zero_mode_norm", c.max_zero_mode_norm}});
  j["kernel"] = {{"sectors", kc}, {"violations", r.kernel.violations}, {"pass", r.kernel.pass}};
  json pe = json::array();
  for (const PairingEntry& e : r.pairing.entries)
    pe.push_back({{"sector_ker_q", e.lower}, {"sector_ker_qdag", e.lower + 1}, {"count_ker_q", e.count_lower},
                  {"count_ker_qdag", e.count_upper}, {"compared", e.compared}, {"max_difference", e.max_difference},
                  {"pass", e.pass}});
  j["pairing"] = {{"entries", pe}, {"tolerance", r.pairing.tolerance}, {"pass", r.pairing.pass}};
  json items = json::array();
  for (const SumCheckItem& it : r.sums.items)
    items.push_back({{"fermions", it.fermions}, {"index", it.index}, {"lambda", it.lambda}, {"sum_norm", it.sum_norm},
                     {"residual", it.residual}, {"classification", it.classification}});
  j["sector_sums"] = {{"items", items}, {"tolerance", r.sums.tolerance}, {"pass", r.sums.pass}};
  if (r.sums.epsilon_relation_residual) j["sector_sums"]["epsilon_relation_residual"] = *r.sums.epsilon_relation_residual;
  return j;
}

void write_sector_csv(std::ostream& os, const SusySpectra& spectra) {
  os << "sector,index,lambda,ker_tag\n";
  for (const SectorSpectrum& sp : spectra.sectors)
    for (std::size_t i = 0; i < sp.values.size(); ++i)
      os << sp.fermions << ',' << i << ',' << format_double(sp.values[i]) << ',' << to_string(sp.tags[i]) << '\n';
}

}  // namespace shapeinv
