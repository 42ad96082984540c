#pragma once

#include <iosfwd>
#include <string>

#include "mpsylv/errors.hpp"
#include "mpsylv/matrix.hpp"

namespace mpsylv {

class MatrixMarketError : public Error {
 public:
  using Error::Error;
};

/// Reads "array" or "coordinate" Matrix Market data with real, integer or
/// complex fields and general, symmetric, skew-symmetric or hermitian
/// symmetry.  Decimal and hexfloat numbers are both accepted.
Matrix read_matrix_market(std::istream& in);
Matrix read_matrix_market_file(const std::string& path);

/// Writes "array complex general" with hexfloat entries, so reading the file
/// back reproduces every double exactly.
void write_matrix_market(std::ostream& out, const Matrix& M);
void write_matrix_market_file(const std::string& path, const Matrix& M);

}  // namespace mpsylv
