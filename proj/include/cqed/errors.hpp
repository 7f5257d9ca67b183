#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace cqed {

/// Invalid arguments: out-of-range quantum numbers, dimension mismatches, etc.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when a polynomial's leading coefficient vanishes.
class DegenerateDegreeError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A time integration left its admissible region (trace drift, norm growth).
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(std::string solver, double time, const std::string& what)
      : std::runtime_error(solver + " integration failed at t=" + std::to_string(time) + ": " + what),
        solver_(std::move(solver)),
        time_(time) {}

  const std::string& solver() const noexcept { return solver_; }
  double time() const noexcept { return time_; }

 private:
  std::string solver_;
  double time_;
};

}  // namespace cqed
