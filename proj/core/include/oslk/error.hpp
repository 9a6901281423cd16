#pragma once

#include <stdexcept>
#include <string>

namespace oslk {

/// Bad argument or malformed value (non-finite number, out-of-range index,
/// violated precondition).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The request has no solution, e.g. more rows than columns in an assignment.
class Infeasible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File-system or format failure. The message carries the offending path.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A post-condition the library guarantees did not hold.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace oslk
