#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mpsylv {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

/// T_A[i,i] + T_B[j,j] == 0 in a triangular Sylvester solve.
class SingularEquationError : public Error {
 public:
  SingularEquationError(std::size_t i, std::size_t j)
      : Error("singular Sylvester equation: T_A(" + std::to_string(i) + "," +
              std::to_string(i) + ") + T_B(" + std::to_string(j) + "," + std::to_string(j) +
              ") == 0"),
        row(i),
        col(j) {}
  std::size_t row;
  std::size_t col;
};

/// NaN or Inf produced mid-computation.
class NumericBreakdownError : public Error {
 public:
  using Error::Error;
};

class IterationLimitError : public Error {
 public:
  using Error::Error;
};

class SingularMatrixError : public Error {
 public:
  using Error::Error;
};

class RankDeficientError : public Error {
 public:
  using Error::Error;
};

class NotHermitianError : public Error {
 public:
  using Error::Error;
};

/// Explicit Kronecker form requested above the configured size cap.
class KroneckerCapError : public Error {
 public:
  using Error::Error;
};

}  // namespace mpsylv
