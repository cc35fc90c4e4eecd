#pragma once

#include <stdexcept>

namespace geonet {

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Caller broke a structural precondition (e.g. query radius above index cell size).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// The network has no members left; no further events can be drawn.
class ExtinctError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace geonet
