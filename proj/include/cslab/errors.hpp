#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace cslab {

/// Thrown when an exhaustive enumeration would exceed the caller's budget.
/// Carries the budget that would have been required, so callers (and the
/// CLI) can report how far off the request was instead of silently
/// degrading to a sampled variant.
class BudgetError : public std::runtime_error {
public:
  BudgetError(std::string what, double required, double given)
      : std::runtime_error(std::move(what)), required_(required), given_(given) {}

  double required() const { return required_; }
  double given() const { return given_; }

private:
  double required_;
  double given_;
};

/// Iterative numerical routine failed to reach its tolerance.
class ConvergenceError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace cslab
