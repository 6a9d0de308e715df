#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace chasym {

/// Thrown for inputs that violate a documented precondition (CLI exit code 2).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown when a computation cannot deliver its contract: blow-up, boundary
/// contamination, step-size underflow, quadrature non-convergence (CLI exit code 3).
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Short %g rendering of a number for error messages.
inline std::string fmt_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

}  // namespace chasym
