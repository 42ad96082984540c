#pragma once

#include <cassert>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace mpsylv {

using Complex = std::complex<double>;

/// Dense complex matrix, column-major.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, Complex fill = {})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  /// Row-wise literal, e.g. Matrix::from_rows({{1, 2}, {3, 4}}).
  static Matrix from_rows(std::initializer_list<std::initializer_list<Complex>> rows);
  static Matrix identity(std::size_t n);
  static Matrix diagonal(std::span<const Complex> d);
  /// Column-stacked vector back to an m x n matrix.
  static Matrix from_vec(std::span<const Complex> v, std::size_t rows, std::size_t cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }
  bool is_square() const { return rows_ == cols_; }

  Complex& operator()(std::size_t i, std::size_t j) {
    assert(i < rows_ && j < cols_);
    return data_[j * rows_ + i];
  }
  const Complex& operator()(std::size_t i, std::size_t j) const {
    assert(i < rows_ && j < cols_);
    return data_[j * rows_ + i];
  }

  Complex* data() { return data_.data(); }
  const Complex* data() const { return data_.data(); }

  std::span<Complex> col(std::size_t j) { return {data_.data() + j * rows_, rows_}; }
  std::span<const Complex> col(std::size_t j) const {
    return {data_.data() + j * rows_, rows_};
  }

  /// vec(): the column-stacked entries.
  std::span<const Complex> vec() const { return data_; }
  std::span<Complex> vec() { return data_; }

  Matrix adjoint() const;
  Matrix transpose() const;
  Matrix conjugate() const;

  bool all_finite() const;
  bool is_upper_triangular() const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

/// Exact (binary64) helpers used by oracles, diagnostics and tests.
Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator*(Complex s, const Matrix& a);

/// Reverses the order of rows and columns (J M J with J the exchange matrix).
Matrix flip(const Matrix& m);
/// M J: reverses the column order.
Matrix flip_columns(const Matrix& m);

}  // namespace mpsylv
