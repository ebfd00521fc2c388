#pragma once

#include <stdexcept>
#include <string>

namespace mrcert {

/// Raised when a caller breaks a documented precondition (dimension mismatch,
/// negative radius, invalid handle, ...).
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class OutOfBoundsError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

class EmptyTreeError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed workspace or CSV input. The message carries line/field context.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mrcert
