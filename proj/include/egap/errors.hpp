#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace egap {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid problem description. Carries the offending component when known.
class ValidationError : public Error {
 public:
  enum class Kind { dimension_mismatch, unbounded_box, nonpositive_prox_scale, invalid_objective, malformed_document };

  ValidationError(Kind kind, std::optional<std::size_t> component, const std::string& what);

  Kind kind() const noexcept { return kind_; }
  std::optional<std::size_t> component() const noexcept { return component_; }

 private:
  Kind kind_;
  std::optional<std::size_t> component_;
};

/// Objective evaluated outside its domain (e.g. 1 + b'x <= 0 for the log objective).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An iterative routine stopped before reaching its accuracy target.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double achieved) : Error(what), achieved_(achieved) {}
  double achieved() const noexcept { return achieved_; }

 private:
  double achieved_;
};

/// Subproblem solve failure, tagged with the component that failed.
class InnerSolveError : public Error {
 public:
  InnerSolveError(std::size_t component, const std::string& what);
  std::size_t component() const noexcept { return component_; }

 private:
  std::size_t component_;
};

/// Solver configuration that does not fit the problem (e.g. alg3 on a merely convex objective).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// The step-size condition guaranteeing the excessive gap failed.
class ScheduleError : public Error {
 public:
  ScheduleError(int iteration, double lhs, double rhs, const std::string& what);
  int iteration() const noexcept { return iteration_; }
  double lhs() const noexcept { return lhs_; }
  double rhs() const noexcept { return rhs_; }

 private:
  int iteration_;
  double lhs_;
  double rhs_;
};

/// f(x;beta2) <= d(y;beta1) violated beyond the allowed slack.
class InvariantError : public Error {
 public:
  InvariantError(int iteration, double primal_side, double dual_side);
  int iteration() const noexcept { return iteration_; }
  double primal_side() const noexcept { return primal_side_; }
  double dual_side() const noexcept { return dual_side_; }

 private:
  int iteration_;
  double primal_side_;
  double dual_side_;
};

}  // namespace egap
