#pragma once

#include <stdexcept>
#include <string>

namespace ehdist {

/// Argument outside the domain of a model function (e.g. k > m).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A configuration value violates one of the model invariants.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The configuration is valid but outside what the solver supports
/// (the unimodality argument for the inner problem needs l0 <= s).
class UnsupportedConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An action spends more energy than the battery holds.
class CausalityError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Relative value iteration hit its iteration cap.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double final_span)
      : std::runtime_error(what), final_span_(final_span) {}
  double final_span() const noexcept { return final_span_; }

 private:
  double final_span_;
};

}  // namespace ehdist
