#include <cmath>
#include <sstream>

#include "doctest.h"
#include "shapeinv/errors.hpp"
#include "shapeinv/susy.hpp"

using namespace shapeinv;

namespace {

NBodyModel cs(int n, double alpha) { return make_nbody_model(ModelKind::calogero_sutherland, n, alpha); }

const SusySystem& default_s1() {
  static const SusySystem sys = build_susy(cs(2, 1.0));
  return sys;
}

const SusySpectra& default_spectra() {
  static const SusySpectra sp = sector_spectra(default_s1());
  return sp;
}

}  // namespace

TEST_CASE("fock basis anticommutators are exact") {
  for (int n = 1; n <= 4; ++n) CHECK(anticommutator_residual(FockBasis(n)) == 0.0);
  FockBasis f(3);
  const Eigen::SparseMatrix<double> num = f.number();
  for (unsigned s = 0; s < 8; ++s) CHECK(num.coeff(s, s) == FockBasis::fermion_number(s));
  CHECK(FockBasis::string_sign(0b101, 2) == -1);
  CHECK(FockBasis::string_sign(0b101, 1) == -1);
  CHECK(FockBasis::string_sign(0b100, 1) == 1);
  CHECK_THROWS_AS(f.annihilation(3), DimensionError);
}

TEST_CASE("default cs pair system layout") {
  const SusySystem& s = default_s1();
  CHECK(s.size() == 2032);
  CHECK(s.sector_size(0) == 63 * 8);
  CHECK(s.sector_size(1) == (63 + 64) * 8);
  CHECK(s.sector_size(2) == 64 * 8);
  CHECK(s.cm_length == doctest::Approx(std::sqrt(2.0) * M_PI));
}

TEST_CASE("superalgebra holds at matrix level") {
  const StructureReport r = structure_check(default_s1());
  CHECK(r.q_squared < 1e-12);
  CHECK(r.commutator < 1e-10);
  CHECK(r.commutator_dag < 1e-10);
  CHECK(r.cross_sector_entries == 0);
  CHECK(r.symmetry < 1e-14);
  CHECK(r.anticommutators == 0.0);
  CHECK(r.dropped_imaginary < 1e-12);
}

TEST_CASE("sector minima: R in the empty sector, zero in the full one") {
  const SusySpectra& sp = default_spectra();
  REQUIRE(sp.sectors.size() == 3);
  CHECK(sp.sectors[0].values[0] == doctest::Approx(6.0).epsilon(1e-2));
  CHECK(std::abs(sp.sectors[2].values[0]) < 1e-2);
  for (const auto& sec : sp.sectors) CHECK(sec.values[0] > -1e-8);
}

TEST_CASE("kernel classification") {
  const KernelReport k = kernel_classify(default_s1(), default_spectra());
  CHECK(k.pass);
  CHECK(k.sectors[0].zero == 0);
  CHECK(k.sectors[2].zero == 1);
  CHECK(k.sectors[2].max_zero_mode_norm < 1e-8);
  // Every 0-fermion state is in ker Q, every N-fermion state in ker Q^dagger.
  CHECK(k.sectors[0].ker_qdag == 0);
  CHECK(k.sectors[2].ker_q == 0);
}

TEST_CASE("nonzero levels pair across adjacent sectors") {
  const PairingReport p = pairing_check(default_spectra());
  CHECK(p.pass);
  REQUIRE(p.entries.size() == 2);
  for (const auto& e : p.entries) {
    CHECK(e.count_lower == e.count_upper);
    CHECK(e.max_difference < 1e-6);
  }
}

TEST_CASE("sector sums vanish or are degenerate") {
  const SectorSumReport r = sector_sum_check(default_s1(), default_spectra());
  CHECK(r.pass);
  CHECK(r.items.size() == 6);
  for (const auto& it : r.items) CHECK(it.classification != "violation");
  CHECK_FALSE(r.epsilon_relation_residual);
}

TEST_CASE("variants share the bosonic sector and differ elsewhere") {
  const VariantComparison c = compare_variants(cs(2, 1.0));
  CHECK(c.remainder == doctest::Approx(6.0));
  CHECK(c.zero_block_difference < 1e-2);
  CHECK(c.one_block_distance > 0.1);
  CHECK(c.pass);
  const ResidualReport r = to_report(c, "cs");
  CHECK(r.identity == "susy_variants");
  CHECK(r.pass);
}

TEST_CASE("variant s2 structure") {
  const SusySystem s2 = build_susy(cs(2, 1.0), {}, Variant::s2);
  const StructureReport r = structure_check(s2);
  CHECK(r.q_squared < 1e-12);
  CHECK(r.cross_sector_entries == 0);
  const SusySpectra sp = sector_spectra(s2);
  CHECK(std::abs(sp.sectors[0].values[0]) < 1e-8);
  CHECK(pairing_check(sp).pass);
  CHECK(kernel_classify(s2, sp).pass);
}

TEST_CASE("three-body lattice") {
  SusyGrid g;
  g.m = 14;
  g.cm_modes = 2;
  const SusySystem s = build_susy(cs(3, 1.0), g);
  const StructureReport r = structure_check(s);
  CHECK(r.q_squared_relative < 1e-14);
  CHECK(r.commutator < 1e-10);
  CHECK(r.cross_sector_entries == 0);
  const SusySpectra sp = sector_spectra(s);
  CHECK(pairing_check(sp).pass);
  CHECK(kernel_classify(s, sp).pass);
  const SectorSumReport sums = sector_sum_check(s, sp);
  REQUIRE(sums.epsilon_relation_residual);
  CHECK(*sums.epsilon_relation_residual < 1e-6);
  MESSAGE("N=3 minima " << sp.sectors[0].values[0] << " " << sp.sectors[3].values[0]);
}

TEST_CASE("harmonic pair lattice") {
  SusyGrid g;
  g.m = 48;
  g.cm_modes = 2;
  const auto m = make_nbody_model(ModelKind::harmonic_calogero, 2, 1.0, 1.0);
  const SusySystem s = build_susy(m, g);
  CHECK(structure_check(s).q_squared < 1e-12);
  const SusySpectra sp = sector_spectra(s);
  CHECK(pairing_check(sp).pass);
}

TEST_CASE("susy input validation") {
  CHECK_THROWS_AS(variant_from_string("s3"), ConfigError);
  CHECK(variant_from_string("S2") == Variant::s2);
  SusyGrid g;
  g.m = 4;
  CHECK_THROWS_AS(build_susy(cs(2, 1.0), g), ConfigError);
  g.m = 400;
  g.cm_modes = 400;
  CHECK_THROWS_AS(build_susy(cs(2, 1.0), g), DimensionError);
}

TEST_CASE("sector csv") {
  std::ostringstream os;
  write_sector_csv(os, default_spectra());
  const std::string s = os.str();
  CHECK(s.rfind("sector,index,lambda,ker_tag\n0,0,", 0) == 0);
  CHECK(s.find(",zero\n") != std::string::npos);
  const nlohmann::json j = to_json(analyze(default_s1(), default_spectra()), default_s1());
  CHECK(j["pairing"]["pass"] == true);
  CHECK(j["structure"]["cross_sector_entries"] == 0);
}
