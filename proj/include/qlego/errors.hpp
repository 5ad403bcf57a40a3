#pragma once

#include <stdexcept>
#include <string>

namespace qlego {

// A precondition of a library call was violated (bad leg index, malformed
// tree, overlapping legs, ...).
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed user input: PCM text, network JSON, tree JSON.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An enumeration or search would exceed its configured budget.
class ResourceLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A result failed an internal cross-check (e.g. SST cost vs counted cost).
class VerificationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input is well formed but not a valid instance for the requested
// operation (non-integral MacWilliams transform, Y entry in an MSP
// generator, distance of a state).
class InvalidInputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qlego
