#include "shapeinv/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "shapeinv/errors.hpp"
#include "shapeinv/io.hpp"
#include "shapeinv/shape1d.hpp"
#include "shapeinv/spectral.hpp"
#include "shapeinv/susy.hpp"
#include "shapeinv/verify.hpp"

namespace shapeinv {

namespace {

const std::vector<std::string> kCommands{"verify", "spectrum", "susy", "groundstate", "chain"};
const std::vector<std::string> kFormats{"json", "csv", "dat"};

std::vector<double> family_params(Family1D f, double a, double b) {
  switch (f) {
    case Family1D::rosen_morse_trig:
    case Family1D::coth_hyperbolic: return {b, a};
    case Family1D::rational_harmonic: return {a, b};
    case Family1D::sign: return {a};
  }
  return {};
}

Prepotential1D family_prepotential(const RunConfig& cfg) {
  const Family1D f = family_from_string(*cfg.family);
  return Prepotential1D(f, family_params(f, cfg.a, cfg.b));
}

EigenOptions eigen_options(const RunConfig& cfg) {
  EigenOptions o;
  o.method = eigen_method_from_string(cfg.method);
  o.seed = cfg.seed;
  return o;
}

double relative_error(double got, double want) { return std::abs(got - want) / std::max(1.0, std::abs(want)); }

class Output {
 public:
  explicit Output(const RunConfig& cfg) : cfg_(cfg) { std::filesystem::create_directories(cfg.out); }

  void json(const std::string& name, const nlohmann::json& report) {
    if (!cfg_.wants("json")) return;
    nlohmann::json j;
    j["config"] = cfg_.to_json();
    j["config_hash"] = cfg_.hash();
    j["report"] = report;
    open(name + ".json") << j.dump(2) << "\n";
  }

  std::ofstream csv(const std::string& name) {
    return cfg_.wants("csv") ? open(name + ".csv") : std::ofstream();
  }

  // Plot data carries the config as leading comment lines.
  std::ofstream dat(const std::string& name) {
    if (!cfg_.wants("dat")) return {};
    std::ofstream os = open(name + ".dat");
    os << "# config_hash " << cfg_.hash() << "\n";
    for (const auto& [k, v] : cfg_.canonical()) os << "# " << k << " = " << v << "\n";
    return os;
  }

  const std::vector<std::string>& written() const { return written_; }

 private:
  std::ofstream open(const std::string& file) {
    const auto path = cfg_.out / file;
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ConfigError("cannot write " + path.string());
    written_.push_back(path.string());
    return os;
  }

  const RunConfig& cfg_;
  std::vector<std::string> written_;
};

const char* verdict(bool pass) { return pass ? "PASS" : "FAIL"; }

// Unknowns per axis when --grid is not given.
int default_nbody_grid(int n) {
  switch (n) {
    case 2: return 64;
    case 3: return 20;
    case 4: return 12;
    default: return 9;
  }
}

GridSpec nbody_grid(const RunConfig& cfg, const NBodyModel& model) {
  const int m = cfg.grid.value_or(default_nbody_grid(model.n()));
  if (model.periodic()) return cube_grid(model.n(), 0.0, M_PI, m, Sector::ordered);
  double ext = 3.0;
  if (model.kind() == ModelKind::harmonic_calogero) ext = std::sqrt(40.0 / model.beta());
  ext = cfg.extent.value_or(ext);
  return cube_grid(model.n(), -ext, ext, m, Sector::ordered);
}

double family_extent(const RunConfig& cfg, const Prepotential1D& prep) {
  if (cfg.extent) return *cfg.extent;
  switch (prep.family()) {
    case Family1D::rational_harmonic: return std::sqrt((4.0 * cfg.nmax + 60.0) / prep.param(0));
    case Family1D::coth_hyperbolic: return 60.0 / prep.param(1);
    default: return 10.0;
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// RunConfig

bool RunConfig::wants(const std::string& format) const {
  return std::find(formats.begin(), formats.end(), format) != formats.end();
}

void RunConfig::validate() const {
  if (std::find(kCommands.begin(), kCommands.end(), command) == kCommands.end())
    throw ConfigError("unknown subcommand '" + command + "'");
  for (const auto& f : formats)
    if (std::find(kFormats.begin(), kFormats.end(), f) == kFormats.end())
      throw ConfigError("unknown output format '" + f + "'");
  if (grid && *grid < 8) throw ConfigError("grid must be >= 8");
  if (extent && !(*extent > 0.0)) throw ConfigError("extent must be > 0");
  if (cm_modes < 1) throw ConfigError("cm_modes must be >= 1");
  if (k < 1) throw ConfigError("k must be >= 1");
  if (nmax < 0 || nmax > 50) throw ConfigError("nmax must lie in [0, 50]");
  if (level < 0 || level > kMaxChainLength) throw ConfigError("level must lie in [0, 6]");
  if (stencil != 2 && stencil != 4) throw ConfigError("stencil must be 2 or 4");
  if (trials < 1) throw ConfigError("trials must be >= 1");
  if (tol && !(*tol > 0.0)) throw ConfigError("tol must be > 0");
  eigen_method_from_string(method);
  if (command == "susy") {
    std::string v = variant;
    std::transform(v.begin(), v.end(), v.begin(), ::tolower);
    if (v != "both") variant_from_string(v);
  }
  if (command == "chain" && !family) throw ConfigError("chain needs --family");
  if (family) family_prepotential(*this);
  if (!family || command == "verify" || command == "susy" || command == "groundstate") NBodyModel check(model);
}

std::map<std::string, std::string> RunConfig::canonical() const {
  std::map<std::string, std::string> m;
  m["command"] = command;
  m["kind"] = to_string(model.kind);
  m["N"] = std::to_string(model.n);
  m["alpha"] = format_double(model.alpha);
  if (model.omega) m["omega"] = format_double(*model.omega);
  if (model.beta_override) m["beta_override"] = format_double(*model.beta_override);
  m["epsilon_sing"] = format_double(model.epsilon_sing);
  if (family) m["family"] = *family;
  m["a"] = format_double(a);
  m["b"] = format_double(b);
  m["nmax"] = std::to_string(nmax);
  m["level"] = std::to_string(level);
  if (grid) m["grid"] = std::to_string(*grid);
  if (extent) m["extent"] = format_double(*extent);
  m["cm_modes"] = std::to_string(cm_modes);
  m["k"] = std::to_string(k);
  m["stencil"] = std::to_string(stencil);
  m["method"] = method;
  m["reduce"] = reduce ? "true" : "false";
  m["plot"] = plot ? "true" : "false";
  m["trials"] = std::to_string(trials);
  m["seed"] = std::to_string(seed);
  if (tol) m["tol"] = format_double(*tol);
  m["variant"] = variant;
  std::string f;
  for (const auto& s : formats) f += (f.empty() ? "" : ",") + s;
  m["format"] = f;
  return m;
}

std::string RunConfig::to_text() const {
  std::string s;
  for (const auto& [k, v] : canonical()) s += k + " = " + v + "\n";
  return s;
}

std::string RunConfig::hash() const { return fnv1a_hex(to_text()); }

nlohmann::json RunConfig::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [k, v] : canonical()) j[k] = v;
  return j;
}

// ---------------------------------------------------------------------------
// Parsing

std::optional<RunConfig> parse_run_config(int argc, const char* const* argv, std::ostream& out) {
  RunConfig cfg;
  CLI::App app{"Shape-invariance checks for Calogero-type models"};
  app.name("shapeinv");
  app.set_config("--config", "", "flat key = value file; command-line flags win");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.require_subcommand(1, 1);

  std::string kind = "cs";
  std::string format = "json,csv,dat";
  app.add_option("--kind", kind, "calogero | harmonic | cs");
  app.add_option("--n,--N", cfg.model.n, "number of particles");
  app.add_option("--alpha", cfg.model.alpha, "coupling exponent");
  app.add_option("--omega", cfg.model.omega, "harmonic frequency");
  app.add_option("--beta-override,--beta_override", cfg.model.beta_override, "harmonic beta used as given");
  app.add_option("--epsilon-sing,--epsilon_sing", cfg.model.epsilon_sing, "coincidence threshold");
  app.add_option("--family", cfg.family, "1-D family: rosen-morse | rational | sign | coth");
  app.add_option("--a", cfg.a, "1-D parameter a");
  app.add_option("--b", cfg.b, "1-D parameter b");
  app.add_option("--nmax", cfg.nmax, "highest 1-D level");
  app.add_option("--level", cfg.level, "chain level n");
  app.add_option("--grid", cfg.grid, "grid unknowns per axis");
  app.add_option("--extent", cfg.extent, "box half-width (or length) for unbounded domains");
  app.add_option("--cm-modes,--cm_modes", cfg.cm_modes, "centre-of-mass Fourier modes (susy)");
  app.add_option("--k", cfg.k, "number of eigenvalues");
  app.add_option("--stencil", cfg.stencil, "finite-difference order (2 or 4)");
  app.add_option("--method", cfg.method, "automatic | dense | iterative");
  app.add_flag("--reduce", cfg.reduce, "use the N = 2 reduction");
  app.add_flag("--plot", cfg.plot, "write wavefunction plot data");
  app.add_option("--trials", cfg.trials, "sampled configurations per identity");
  app.add_option("--seed", cfg.seed, "master seed");
  app.add_option("--tol", cfg.tol, "override every verify tolerance");
  app.add_option("--variant", cfg.variant, "s1 | s2 | both");
  app.add_option("--out", cfg.out, "output directory");
  app.add_option("--format", format, "comma-separated subset of json,csv,dat");

  for (const auto& name : kCommands) app.add_subcommand(name)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return std::nullopt;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw ConfigError(e.what());
  }

  cfg.command = app.get_subcommands().front()->get_name();
  cfg.model.kind = kind_from_string(kind);
  cfg.formats.clear();
  std::stringstream fs(format);
  for (std::string item; std::getline(fs, item, ',');)
    if (!item.empty()) cfg.formats.push_back(item);
  cfg.validate();
  return cfg;
}

// ---------------------------------------------------------------------------
// verify

int cmd_verify(const RunConfig& cfg, std::ostream& log) {
  const NBodyModel model(cfg.model);
  VerifyOptions vo;
  vo.trials = cfg.trials;
  vo.seed = cfg.seed;
  if (cfg.tol) vo.tol_identity = vo.tol_structural = vo.tol_exact = *cfg.tol;
  Output out(cfg);
  bool pass = true;
  for (const ResidualReport& r : run_verify_suite(model, vo)) {
    out.json(r.identity, to_json(r));
    log << verdict(r.pass) << " " << r.identity << " max=" << format_double(r.max_residual)
        << " tol=" << format_double(r.tolerance) << "\n";
    pass = pass && r.pass;
  }
  return pass ? kExitPass : kExitFailure;
}

// ---------------------------------------------------------------------------
// spectrum

namespace {

int spectrum_family(const RunConfig& cfg, std::ostream& log) {
  const Prepotential1D prep = family_prepotential(cfg);
  const SpectrumChain chain = algebraic_spectrum(prep, cfg.nmax);
  const int levels = static_cast<int>(chain.energies.size());
  Interval dom = prep.natural_domain();
  const bool grid_ok = prep.family() != Family1D::sign && levels > 0;
  if (!std::isfinite(dom.hi)) dom.hi = family_extent(cfg, prep);
  const int m = cfg.grid.value_or(2000);

  nlohmann::json report;
  report["family"] = prep.describe();
  report["algebraic"] = chain.energies;
  report["bound_ladder"] = chain.bound_ladder;
  report["domain"] = {dom.lo, dom.hi};
  std::vector<double> grid_values, residuals;
  double worst = 0.0;
  if (grid_ok) {
    const SparseHamiltonian h = discretize(prep, interval_grid(dom.lo, dom.hi, m), Form1D::potential, cfg.stencil);
    const SpectrumResult s = eigen(h, levels, eigen_options(cfg));
    grid_values = s.values;
    residuals = s.residuals;
    for (int n = 0; n < levels; ++n) worst = std::max(worst, relative_error(grid_values[n], chain.energies[n]));
    report["grid"] = grid_values;
    report["method"] = s.method;
  } else {
    report["note"] = "no grid comparison for this family (point interaction or no levels)";
  }
  const bool pass = worst <= 1e-3;
  report["max_relative"] = worst;
  report["tolerance"] = 1e-3;
  report["pass"] = pass;
  Output out(cfg);
  out.json("spectrum", report);
  if (auto os = out.csv("spectrum"); os.is_open()) {
    os << "n,algebraic,grid,rel_error,residual\n";
    for (int n = 0; n < levels; ++n) {
      os << n << "," << format_double(chain.energies[n]);
      if (grid_ok)
        os << "," << format_double(grid_values[n]) << ","
           << format_double(relative_error(grid_values[n], chain.energies[n])) << "," << format_double(residuals[n]);
      else
        os << ",,,";
      os << "\n";
    }
  }
  if (cfg.plot) {
    const Grid1D g{dom.lo, dom.hi, m};
    for (int n = 0; n < std::min(levels, kMaxChainLength + 1); ++n) {
      const GridFunction1D psi = wavefunction_chain(prep, n, g);
      if (auto os = out.dat("psi_" + std::to_string(n)); os.is_open()) write_two_column(os, psi);
    }
  }
  for (int n = 0; n < levels; ++n) {
    log << "n=" << n << " algebraic=" << format_double(chain.energies[n]);
    if (grid_ok) log << " grid=" << format_double(grid_values[n]);
    log << "\n";
  }
  log << verdict(pass) << " spectrum max_relative=" << format_double(worst) << "\n";
  return pass ? kExitPass : kExitFailure;
}

int spectrum_reduced(const RunConfig& cfg, const NBodyModel& model, std::ostream& log) {
  const TwoBodyReduction red = two_body_reduction(model, cfg.k);
  if (!red.bound) throw DomainError("the reduced problem has no discrete ladder; drop --reduce");
  const int k = std::min<int>(cfg.k, static_cast<int>(red.algebraic_levels.size()));
  const ReductionCheck chk = reduction_spectrum_check(red, cfg.grid.value_or(2000), k, cfg.extent, eigen_options(cfg));
  nlohmann::json report{{"mapping", red.mapping},
                        {"algebraic", chk.algebraic},
                        {"grid", chk.grid},
                        {"max_relative", chk.max_relative},
                        {"tolerance", chk.tolerance},
                        {"pass", chk.pass}};
  Output out(cfg);
  out.json("spectrum", report);
  if (auto os = out.csv("spectrum"); os.is_open()) {
    os << "n,algebraic,grid,rel_error\n";
    for (int n = 0; n < k; ++n)
      os << n << "," << format_double(chk.algebraic[n]) << "," << format_double(chk.grid[n]) << ","
         << format_double(relative_error(chk.grid[n], chk.algebraic[n])) << "\n";
  }
  log << "reduction: " << red.mapping << "\n";
  for (int n = 0; n < k; ++n)
    log << "n=" << n << " algebraic=" << format_double(chk.algebraic[n]) << " grid=" << format_double(chk.grid[n])
        << "\n";
  log << verdict(chk.pass) << " reduced spectrum max_relative=" << format_double(chk.max_relative) << "\n";
  return chk.pass ? kExitPass : kExitFailure;
}

int spectrum_nbody(const RunConfig& cfg, const NBodyModel& model, std::ostream& log) {
  const SparseHamiltonian h = discretize(model, nbody_grid(cfg, model), FormN::direct, cfg.stencil);
  const SpectrumResult s = eigen(h, cfg.k, eigen_options(cfg));
  Output out(cfg);
  out.json("spectrum", {{"model", model.describe()},
                        {"grid", h.grid.describe()},
                        {"values", s.values},
                        {"residuals", s.residuals},
                        {"method", s.method}});
  if (auto os = out.csv("spectrum"); os.is_open()) write_spectrum_csv(os, s);
  for (std::size_t i = 0; i < s.values.size(); ++i) log << "lambda_" << i << "=" << format_double(s.values[i]) << "\n";
  return kExitPass;
}

}  // namespace

int cmd_spectrum(const RunConfig& cfg, std::ostream& log) {
  if (cfg.family) return spectrum_family(cfg, log);
  const NBodyModel model(cfg.model);
  if (cfg.reduce || model.periodic()) {
    if (model.n() != 2) throw ConfigError("grid spectra of the periodic kind need N = 2 (reduction)");
    return spectrum_reduced(cfg, model, log);
  }
  return spectrum_nbody(cfg, model, log);
}

// ---------------------------------------------------------------------------
// susy

namespace {

bool structure_ok(const StructureReport& r) {
  return r.q_squared_relative < 1e-12 && r.commutator < 1e-10 && r.commutator_dag < 1e-10 &&
         r.cross_sector_entries == 0 && r.anticommutators == 0.0;
}

}  // namespace

int cmd_susy(const RunConfig& cfg, std::ostream& log) {
  const NBodyModel model(cfg.model);
  SusyGrid g;
  g.m = cfg.grid.value_or(g.m);
  g.cm_modes = cfg.cm_modes;
  g.extent = cfg.extent;
  std::string v = cfg.variant;
  std::transform(v.begin(), v.end(), v.begin(), ::tolower);
  std::vector<Variant> variants;
  if (v == "both")
    variants = {Variant::s1, Variant::s2};
  else
    variants = {variant_from_string(v)};

  Output out(cfg);
  bool pass = true;
  for (Variant var : variants) {
    const SusySystem sys = build_susy(model, g, var);
    const SusySpectra sp = sector_spectra(sys, 0, eigen_options(cfg));
    const SusyReport rep = analyze(sys, sp);
    const bool ok = structure_ok(rep.structure) && rep.kernel.pass && rep.pairing.pass && rep.sums.pass;
    nlohmann::json j = to_json(rep, sys);
    j["pass"] = ok;
    const std::string name = "susy_" + to_string(var);
    out.json(name, j);
    if (auto os = out.csv(name + "_sectors"); os.is_open()) write_sector_csv(os, sp);
    log << name << " dimension=" << sys.size() << " |Q^2|=" << format_double(rep.structure.q_squared) << "\n";
    for (std::size_t f = 0; f < rep.sector_minima.size(); ++f)
      log << "  sector " << f << " minimum=" << format_double(rep.sector_minima[f]) << "\n";
    log << verdict(ok) << " " << name << " kernel=" << verdict(rep.kernel.pass)
        << " pairing=" << verdict(rep.pairing.pass) << " sums=" << verdict(rep.sums.pass) << "\n";
    pass = pass && ok;
  }
  if (variants.size() == 2) {
    const VariantComparison c = compare_variants(model, g, cfg.k);
    const ResidualReport r = to_report(c, model.describe());
    out.json(r.identity, to_json(r));
    log << verdict(c.pass) << " variants zero_block_difference=" << format_double(c.zero_block_difference)
        << " one_block_distance=" << format_double(c.one_block_distance) << "\n";
    pass = pass && c.pass;
  }
  return pass ? kExitPass : kExitFailure;
}

// ---------------------------------------------------------------------------
// groundstate

int cmd_groundstate(const RunConfig& cfg, std::ostream& log) {
  const NBodyModel model(cfg.model);
  const GridSpec grid = nbody_grid(cfg, model);
  const JastrowGroundState gs = jastrow_ground_state(model, grid, cfg.stencil, 0.0, cfg.seed);
  const PartnerGroundState partner = partner_ground_state(model);

  constexpr double kJetTol = 1e-8;
  constexpr double kPartnerTol = 1e-3;
  bool pass = gs.jet_residual < kJetTol;
  nlohmann::json report{{"model", model.describe()},
                        {"grid", grid.describe()},
                        {"jet_residual", gs.jet_residual},
                        {"jet_tolerance", kJetTol},
                        {"grid_residual", gs.grid_residual},
                        {"margin_cells", gs.margin_cells},
                        {"normalizable", gs.normalizable},
                        {"warnings", gs.warnings},
                        {"partner_energy", partner.energy},
                        {"partner_normalizable", partner.normalizable},
                        {"partner_warnings", partner.warnings}};
  if (model.n() == 2 && model.kind() != ModelKind::calogero) {
    const double e = partner_grid_energy(model, cfg.grid.value_or(2000), eigen_options(cfg));
    const double rel = relative_error(e, partner.energy);
    report["partner_grid_energy"] = e;
    report["partner_grid_relative"] = rel;
    report["partner_tolerance"] = kPartnerTol;
    pass = pass && rel < kPartnerTol;
    log << "partner grid energy=" << format_double(e) << "\n";
  }
  report["warning"] = !gs.warnings.empty() || !partner.warnings.empty();
  report["pass"] = pass;

  Output out(cfg);
  out.json("groundstate", report);
  if (auto os = out.dat("groundstate"); os.is_open()) {
    os << "# dimension " << grid.dimension() << "\n# sector " << to_string(grid.sector) << "\n";
    for (std::size_t i = 0; i < gs.values.size(); ++i) {
      for (double x : gs.coords[i]) os << format_double(x) << " ";
      os << format_double(gs.values[i]) << "\n";
    }
  }
  log << "jet residual=" << format_double(gs.jet_residual) << " grid residual=" << format_double(gs.grid_residual)
      << "\npartner energy R=" << format_double(partner.energy) << "\n";
  for (const auto& w : gs.warnings) log << "warning: " << w << "\n";
  for (const auto& w : partner.warnings) log << "warning (partner): " << w << "\n";
  log << verdict(pass) << " groundstate\n";
  return pass ? kExitPass : kExitFailure;
}

// ---------------------------------------------------------------------------
// chain

int cmd_chain(const RunConfig& cfg, std::ostream& log) {
  const Prepotential1D prep = family_prepotential(cfg);
  const SpectrumChain chain = algebraic_spectrum(prep, cfg.level);
  if (static_cast<int>(chain.energies.size()) <= cfg.level)
    throw DomainError("level " + std::to_string(cfg.level) + " is not on the ladder");
  Interval dom = prep.natural_domain();
  if (!std::isfinite(dom.lo)) dom.lo = -family_extent(cfg, prep);
  if (!std::isfinite(dom.hi)) dom.hi = family_extent(cfg, prep);
  const GridFunction1D psi = wavefunction_chain(prep, cfg.level, Grid1D{dom.lo, dom.hi, cfg.grid.value_or(2000)});
  const double e = chain.energies[cfg.level];
  const double rq = rayleigh_quotient(prep, psi);
  const int nodes = count_nodes(psi);
  const double rel = relative_error(rq, e);
  const bool pass = nodes == cfg.level && rel < 1e-3;

  Output out(cfg);
  out.json("chain", {{"family", prep.describe()},
                     {"level", cfg.level},
                     {"energy", e},
                     {"rayleigh_quotient", rq},
                     {"relative_error", rel},
                     {"nodes", nodes},
                     {"normalizable", psi.normalizable},
                     {"warnings", psi.warnings},
                     {"pass", pass}});
  if (auto os = out.dat("chain_" + std::to_string(cfg.level)); os.is_open()) write_two_column(os, psi);
  log << "E_" << cfg.level << "=" << format_double(e) << " rayleigh=" << format_double(rq) << " nodes=" << nodes
      << "\n";
  for (const auto& w : psi.warnings) log << "warning: " << w << "\n";
  log << verdict(pass) << " chain\n";
  return pass ? kExitPass : kExitFailure;
}

// ---------------------------------------------------------------------------

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::optional<RunConfig> cfg;
  try {
    cfg = parse_run_config(argc, argv, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  if (!cfg) return kExitPass;
  try {
    if (cfg->command == "verify") return cmd_verify(*cfg, out);
    if (cfg->command == "spectrum") return cmd_spectrum(*cfg, out);
    if (cfg->command == "susy") return cmd_susy(*cfg, out);
    if (cfg->command == "groundstate") return cmd_groundstate(*cfg, out);
    return cmd_chain(*cfg, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DimensionError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "failure: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace shapeinv
