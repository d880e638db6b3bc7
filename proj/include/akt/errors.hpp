#pragma once

#include <stdexcept>
#include <string>

namespace akt {

// Bad arguments: size mismatches, empty inputs, malformed configs.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// The operation declines to run (e.g. factorial blow-up guard).
class RefusalError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// Numerical fitting failed (rank deficiency, degenerate data).
class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace akt
