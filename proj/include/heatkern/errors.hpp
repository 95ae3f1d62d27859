#pragma once

#include <stdexcept>
#include <string>

namespace heatkern {

// Input outside the mathematical domain of an operation (bad point, bad
// weight parameter, t below t_min, ...).
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// A numerical procedure could not deliver its contract: eigensolve did not
// converge, truncation cutoff exceeds N_max, quadrature budget exceeded.
class NumericalFailure : public std::runtime_error {
 public:
  explicit NumericalFailure(const std::string& what) : std::runtime_error(what) {}
};

// A checked invariant (orthogonality, envelope sandwich, ...) was violated.
class InvariantFailure : public std::runtime_error {
 public:
  explicit InvariantFailure(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace heatkern
