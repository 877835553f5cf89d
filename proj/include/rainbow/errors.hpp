#pragma once

#include <stdexcept>
#include <string>

namespace rainbow {

// Invalid numeric range or inconsistent arguments.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Argument refers to something outside the object (e.g. an edge not in G).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Exact enumeration requested beyond its size budget.
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// Parameters are valid individually but the requested object cannot be
// built for this particular input (e.g. I0 target unreachable).
class StructuralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Internal invariant broken. Always a bug, never a random outcome.
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace rainbow
