// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace mcf {

enum class ErrorKind {
  validation,  // bad input, config, or precondition
  numerical,   // NaN/Inf, solver breakdown
  io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline Error validation_error(const std::string& what) {
  return Error(ErrorKind::validation, what);
}

inline Error io_error(const std::string& what) {
  return Error(ErrorKind::io, what);
}

/// Raised by the time steppers. Carries the offending node (lattice index)
/// or the residual a linear solve stalled at.
class NumericalFailure : public Error {
 public:
  NumericalFailure(const std::string& what, long node, double achieved_residual)
      : Error(ErrorKind::numerical, what),
        node_(node),
        achieved_residual_(achieved_residual) {}

  long node() const noexcept { return node_; }
  double achieved_residual() const noexcept { return achieved_residual_; }

 private:
  long node_;
  double achieved_residual_;
};

}  // namespace mcf
