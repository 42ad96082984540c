#include "mpsylv/matrix.hpp"

#include <cmath>

#include "mpsylv/errors.hpp"

namespace mpsylv {

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<Complex>> rows) {
  const std::size_t m = rows.size();
  const std::size_t n = m == 0 ? 0 : rows.begin()->size();
  Matrix out(m, n);
  std::size_t i = 0;
  for (const auto& row : rows) {
    if (row.size() != n) throw DimensionError("from_rows: ragged row lengths");
    std::size_t j = 0;
    for (const auto& v : row) out(i, j++) = v;
    ++i;
  }
  return out;
}

Matrix Matrix::identity(std::size_t n) {
  Matrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) out(i, i) = 1.0;
  return out;
}

Matrix Matrix::diagonal(std::span<const Complex> d) {
  Matrix out(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) out(i, i) = d[i];
  return out;
}

Matrix Matrix::from_vec(std::span<const Complex> v, std::size_t rows, std::size_t cols) {
  if (v.size() != rows * cols) throw DimensionError("from_vec: length mismatch");
  Matrix out(rows, cols);
  std::copy(v.begin(), v.end(), out.data());
  return out;
}

Matrix Matrix::adjoint() const {
  Matrix out(cols_, rows_);
  for (std::size_t j = 0; j < cols_; ++j)
    for (std::size_t i = 0; i < rows_; ++i) out(j, i) = std::conj((*this)(i, j));
  return out;
}

Matrix Matrix::transpose() const {
  Matrix out(cols_, rows_);
  for (std::size_t j = 0; j < cols_; ++j)
    for (std::size_t i = 0; i < rows_; ++i) out(j, i) = (*this)(i, j);
  return out;
}

Matrix Matrix::conjugate() const {
  Matrix out(*this);
  for (auto& z : out.data_) z = std::conj(z);
  return out;
}

bool Matrix::all_finite() const {
  for (const auto& z : data_)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  return true;
}

bool Matrix::is_upper_triangular() const {
  for (std::size_t j = 0; j < cols_; ++j)
    for (std::size_t i = j + 1; i < rows_; ++i)
      if ((*this)(i, j) != Complex{}) return false;
  return true;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("operator+");
  Matrix out(a);
  for (std::size_t k = 0; k < a.size(); ++k) out.data()[k] += b.data()[k];
  return out;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("operator-");
  Matrix out(a);
  for (std::size_t k = 0; k < a.size(); ++k) out.data()[k] -= b.data()[k];
  return out;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw DimensionError("operator*");
  Matrix out(a.rows(), b.cols());
  for (std::size_t j = 0; j < b.cols(); ++j)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex bkj = b(k, j);
      for (std::size_t i = 0; i < a.rows(); ++i) out(i, j) += a(i, k) * bkj;
    }
  return out;
}

Matrix operator*(Complex s, const Matrix& a) {
  Matrix out(a);
  for (std::size_t k = 0; k < a.size(); ++k) out.data()[k] *= s;
  return out;
}

Matrix flip(const Matrix& m) {
  Matrix out(m.rows(), m.cols());
  for (std::size_t j = 0; j < m.cols(); ++j)
    for (std::size_t i = 0; i < m.rows(); ++i)
      out(i, j) = m(m.rows() - 1 - i, m.cols() - 1 - j);
  return out;
}

Matrix flip_columns(const Matrix& m) {
  Matrix out(m.rows(), m.cols());
  for (std::size_t j = 0; j < m.cols(); ++j)
    for (std::size_t i = 0; i < m.rows(); ++i) out(i, j) = m(i, m.cols() - 1 - j);
  return out;
}

}  // namespace mpsylv
