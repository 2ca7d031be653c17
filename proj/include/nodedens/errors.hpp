#pragma once

#include <stdexcept>
#include <string>

namespace nodedens {

// Argument outside the mathematical domain of a density or transform.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Model or configuration parameter that can never be valid (R <= 0, m = 0, ...).
class InvalidParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class MissingSamples : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InsufficientSamples : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Maximizer sits on the search bracket boundary.
class BracketError : public std::runtime_error {
 public:
  BracketError(const std::string& what, double best)
      : std::runtime_error(what), best_(best) {}
  double best() const noexcept { return best_; }

 private:
  double best_;
};

// Adaptive quadrature ran out of panels; carries the best estimate obtained.
class ToleranceNotMet : public std::runtime_error {
 public:
  ToleranceNotMet(const std::string& what, double estimate, double error)
      : std::runtime_error(what), estimate_(estimate), error_(error) {}
  double estimate() const noexcept { return estimate_; }
  double error() const noexcept { return error_; }

 private:
  double estimate_;
  double error_;
};

}  // namespace nodedens
