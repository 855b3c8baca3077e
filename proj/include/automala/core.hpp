#pragma once

#include <Eigen/Core>

#include <cstdio>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace automala {

using Vector = Eigen::VectorXd;

// Bad arguments from the caller: dimension mismatch, non-finite input,
// parameters out of range.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Evaluation outside the support of a target, where the gradient is undefined.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// The step-size selector exceeded its doubling/halving cap.
class TerminationGuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline bool all_finite(const Vector& v) { return v.allFinite(); }

// Shortest decimal spelling that parses back to the same double.
inline std::string format_double(double value) {
  char buf[32];
  for (int precision = 1; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, value);
    if (std::strtod(buf, nullptr) == value) break;
  }
  return buf;
}

}  // namespace automala
