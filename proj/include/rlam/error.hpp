#pragma once

#include <stdexcept>
#include <string>

namespace rlam {

// Operand shapes do not fit the operation.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A scalar argument (rank, tolerance, index, ...) is outside its domain.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Iteration failed to converge or produced non-finite values.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rlam
