#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace cardinal {

inline constexpr double kPi = std::numbers::pi;

// Invalid configuration or out-of-contract argument.
struct ParameterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Evaluation requested outside the trusted region of a table or field.
struct ExtrapolationError : std::domain_error {
  using std::domain_error::domain_error;
};

// A computation cannot reach its stated accuracy with the given resources.
struct AccuracyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A run was requested outside the hypotheses under which its claims hold.
struct HypothesisError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw ParameterError(msg);
}

inline void require_finite(double x, const char* name) {
  if (!std::isfinite(x))
    throw std::domain_error(std::string(name) + " must be finite");
}

}  // namespace cardinal
