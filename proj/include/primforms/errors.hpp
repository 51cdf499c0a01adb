#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pf {

// Invalid argument to a mathematical operation (odd weight, n <= 0, ...).
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// Arithmetic between two quadratic fields with different radicands.
struct FieldMismatchError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Not enough q-expansion coefficients to answer without guessing.
struct PrecisionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Something that the mathematics guarantees failed to hold. Never swallowed.
struct ConsistencyError : std::logic_error {
  using std::logic_error::logic_error;
};

// Requested evaluation needs field arithmetic of degree > 2.
struct CapabilityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, std::size_t pos)
      : std::runtime_error(msg + " at position " + std::to_string(pos)), position(pos) {}
  std::size_t position;
};

// Exact division of series failed; index is the first offending coefficient.
struct InexactDivisionError : std::runtime_error {
  InexactDivisionError(const std::string& msg, std::size_t idx)
      : std::runtime_error(msg), index(idx) {}
  std::size_t index;
};

}  // namespace pf
