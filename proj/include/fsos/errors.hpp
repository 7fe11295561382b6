#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace fsos {

/// Precondition or argument violations (mismatched groups, malformed sets, ...).
struct ArgumentError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// An exact/dense code path was asked to run past its size budget.
struct SizeLimitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A function expected to be nonnegative has a strictly negative value.
/// Carries the witness point (element index) and the offending value.
struct NotNonnegativeError : std::runtime_error {
  std::int64_t witness_index;
  double value;
  NotNonnegativeError(std::int64_t idx, double v)
      : std::runtime_error("function is negative at element index " +
                           std::to_string(idx) + " (value " + std::to_string(v) + ")"),
        witness_index(idx),
        value(v) {}
};

/// A graph required to be chordal is not; carries a chordless cycle
/// (vertex indices, in cycle order).
struct NotChordalError : std::runtime_error {
  std::vector<int> cycle;
  explicit NotChordalError(std::vector<int> c)
      : std::runtime_error("graph is not chordal (chordless cycle of length " +
                           std::to_string(c.size()) + ")"),
        cycle(std::move(c)) {}
};

/// A matrix required to be positive semidefinite is not (within tolerance).
struct NotPsdError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The affine constraint system of a PSD feasibility problem has no solution
/// even ignoring the cone constraint.
struct InfeasibleAffineError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A torus exponent vector cannot be folded injectively onto Z_N^n.
struct AliasingError : std::runtime_error {
  std::vector<std::int64_t> exponent;
  explicit AliasingError(std::vector<std::int64_t> e, const std::string& msg)
      : std::runtime_error(msg), exponent(std::move(e)) {}
};

/// A certificate character sits on the N/2 midpoint and has no Laurent lift.
struct LiftError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The constant coefficient does not dominate; carries the deficit
/// sum |a_chi| - a_chi0.
struct DominanceFailedError : std::runtime_error {
  double deficit;
  explicit DominanceFailedError(double d)
      : std::runtime_error("constant term does not dominate (deficit " +
                           std::to_string(d) + ")"),
        deficit(d) {}
};

}  // namespace fsos
