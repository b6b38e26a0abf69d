#pragma once

#include <stdexcept>
#include <string>

namespace taclab {

// Invalid arguments or parameters outside an operation's domain.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A numerical guard tripped (non-finite values, near-singular systems, quadrature failure).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace taclab
