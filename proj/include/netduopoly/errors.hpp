#pragma once

#include <stdexcept>
#include <string>

namespace netduopoly {

// Bad input: malformed file, out-of-range parameter, infeasible action.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// mu0 + lambda == 0: the stationary point is unbounded.
class SingularPricingError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Water-level denominator is nonpositive for the requested partition.
class InfeasiblePartitionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Gain of targeting with a nonpositive baseline utility.
class UndefinedGainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace netduopoly
