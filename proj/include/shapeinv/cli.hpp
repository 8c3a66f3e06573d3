#pragma once

// Command-line driver. Options are shared by all subcommands and may also be
// given in a flat "key = value" file (--config); command-line flags win.
// Exit codes: 0 pass, 1 scientific failure, 2 usage or config error.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "shapeinv/models.hpp"

namespace shapeinv {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;

struct RunConfig {
  std::string command;

  ModelSpec model{ModelKind::calogero_sutherland, 2, 1.0, std::nullopt, std::nullopt, kDefaultEpsilonSing};

  // 1-D family mode (spectrum, chain).
  std::optional<std::string> family;
  double a = 1.0;
  double b = 1.0;
  int nmax = 4;
  int level = 1;

  std::optional<int> grid;  // unknowns per axis; subcommand-specific default
  std::optional<double> extent;
  int cm_modes = 8;
  int k = 4;
  int stencil = 4;
  std::string method = "automatic";
  bool reduce = false;
  bool plot = false;

  int trials = 100;
  std::uint64_t seed = 0;
  std::optional<double> tol;

  std::string variant = "s1";

  std::filesystem::path out = "shapeinv_out";
  std::vector<std::string> formats{"json", "csv", "dat"};

  // Throws ConfigError or DomainError.
  void validate() const;
  bool wants(const std::string& format) const;
  // Canonical sorted key/value view; the text form is what gets hashed.
  std::map<std::string, std::string> canonical() const;
  std::string to_text() const;
  std::string hash() const;
  nlohmann::json to_json() const;
};

// Parses argv (argv[0] is the program name). Returns nullopt after printing
// help; throws ConfigError on any parse or validation problem.
std::optional<RunConfig> parse_run_config(int argc, const char* const* argv, std::ostream& out);

int cmd_verify(const RunConfig& cfg, std::ostream& log);
int cmd_spectrum(const RunConfig& cfg, std::ostream& log);
int cmd_susy(const RunConfig& cfg, std::ostream& log);
int cmd_groundstate(const RunConfig& cfg, std::ostream& log);
int cmd_chain(const RunConfig& cfg, std::ostream& log);

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace shapeinv
