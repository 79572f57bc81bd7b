#pragma once

#include <stdexcept>
#include <string>

namespace renyi {

/// Argument outside the domain of a function or cone (non-PD matrix, u <= 0,
/// eigenvalue outside dom g, exterior point).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Shape mismatch between operands.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Factorization or eigensolver breakdown.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace renyi
