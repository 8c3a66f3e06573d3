#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace shapeinv {

// Parameters outside a family's admissible set.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Configuration lies on (or within epsilon of) a coincidence hyperplane.
class SingularConfiguration : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// More operator applications than the jet carries derivative orders for.
class JetOrderError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DimensionError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// Iterative eigensolver hit its iteration cap; carries the best residuals seen.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, std::vector<double> best_residuals)
      : std::runtime_error(what), best_residuals_(std::move(best_residuals)) {}
  const std::vector<double>& best_residuals() const { return best_residuals_; }

 private:
  std::vector<double> best_residuals_;
};

}  // namespace shapeinv
