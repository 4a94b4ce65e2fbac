// Copyright (c) 2026 bfheat contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef BFHEAT_ERRORS_HPP
#define BFHEAT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace bfheat {

struct InvalidEpsilon : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct InvalidOrder : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct DimensionMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct SingularMatrix : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// QR iteration ran out of sweeps; carries the deflated/undeflated split.
struct NoConvergence : std::runtime_error {
  int deflated;
  int remaining;
  NoConvergence(const std::string& msg, int deflated_, int remaining_)
      : std::runtime_error(msg), deflated(deflated_), remaining(remaining_) {}
};

/// Right-hand side is outside the operator range (nonzero mean component).
struct Unsolvable : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct QuadratureFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace bfheat

#endif  // BFHEAT_ERRORS_HPP
