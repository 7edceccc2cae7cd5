#pragma once

#include <stdexcept>
#include <string>

namespace sgnet {

/// Argument outside the domain where a function is defined (or supported).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Iterative evaluation (series, quadrature, root search) failed to reach
/// its tolerance. Carries the error estimate that was actually achieved.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double achieved)
      : std::runtime_error(what + " (achieved " + std::to_string(achieved) + ")"),
        achieved_(achieved) {}

  double achieved() const noexcept { return achieved_; }

 private:
  double achieved_;
};

/// A closed-form expression was evaluated too close to one of its
/// (removable) singularities to be trusted.
class NearSingularityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Root search could not bracket a sign change.
class NoRootError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sgnet

namespace sgnet {

/// A Monte Carlo estimator was asked to work from too few samples.
class InsufficientSamplesError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sgnet
