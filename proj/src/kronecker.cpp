#include <cmath>
#include <limits>

#include "mpsylv/errors.hpp"
#include "mpsylv/linalg.hpp"

namespace mpsylv {

Matrix kron_matrix(const Matrix& A, const Matrix& B) {
  Matrix out(A.rows() * B.rows(), A.cols() * B.cols());
  for (std::size_t j = 0; j < A.cols(); ++j)
    for (std::size_t i = 0; i < A.rows(); ++i)
      for (std::size_t l = 0; l < B.cols(); ++l)
        for (std::size_t k = 0; k < B.rows(); ++k)
          out(i * B.rows() + k, j * B.cols() + l) = A(i, j) * B(k, l);
  return out;
}

Matrix sylvester_kron_operator(const Matrix& A, const Matrix& B, std::size_t cap) {
  if (!A.is_square() || !B.is_square()) {
    throw DimensionError("sylvester_kron_operator: coefficients must be square");
  }
  const std::size_t m = A.rows();
  const std::size_t n = B.rows();
  if (m * n > cap) {
    throw KroneckerCapError("sylvester_kron_operator: m*n = " + std::to_string(m * n) +
                            " exceeds the cap of " + std::to_string(cap));
  }
  Matrix M(m * n, m * n);
  // (I_n (x) A): block-diagonal copies of A
  for (std::size_t blk = 0; blk < n; ++blk)
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t i = 0; i < m; ++i) M(blk * m + i, blk * m + j) += A(i, j);
  // (B^T (x) I_m): block (l, j) is B(j, l) I_m
  for (std::size_t l = 0; l < n; ++l)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < m; ++i) M(l * m + i, j * m + i) += B(j, l);
  return M;
}

std::vector<Complex> dense_solve(const Matrix& M, std::span<const Complex> b) {
  const PrecisionContext exact(formats::binary64);
  const LuFactors F = lu(M, exact);
  const Matrix x = lu_solve(F, Matrix::from_vec(b, b.size(), 1), Side::left, Op::none, exact);
  return {x.data(), x.data() + x.size()};
}

Matrix inverse(const Matrix& M) {
  const PrecisionContext exact(formats::binary64);
  return lu_solve(lu(M, exact), Matrix::identity(M.rows()), Side::left, Op::none, exact);
}

double cond_inf(const Matrix& M) {
  return norm(M, NormKind::inf) * norm(inverse(M), NormKind::inf);
}

double sigma_min(const Matrix& M) {
  if (!M.is_square()) throw DimensionError("sigma_min: matrix is not square");
  const PrecisionContext exact(formats::binary64);
  LuFactors F = [&] {
    try {
      return lu(M, exact);
    } catch (const SingularMatrixError&) {
      return LuFactors{Matrix{}, {}, exact};
    }
  }();
  if (F.LU.empty()) return 0.0;

  const std::size_t n = M.rows();
  Matrix x(n, 1);
  for (std::size_t k = 0; k < n; ++k)
    x(k, 0) = Complex(1.0 + 0.37 * static_cast<double>(k % 7), 0.11 * static_cast<double>(k % 5));
  double lambda = 0.0;  // estimate of 1 / sigma_min^2
  for (int it = 0; it < 1000; ++it) {
    const double xn = norm(x, NormKind::frobenius);
    x = (1.0 / xn) * x;
    // (M^* M)^{-1} x = M^{-1} M^{-*} x
    const Matrix z = lu_solve(F, x, Side::left, Op::conj_transpose, exact);
    const Matrix y = lu_solve(F, z, Side::left, Op::none, exact);
    const double next = norm(y, NormKind::frobenius);
    if (!std::isfinite(next)) return 0.0;
    x = y;
    if (it > 0 && std::fabs(next - lambda) <= 1e-8 * next) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  return 1.0 / std::sqrt(lambda);
}

double sep_f(const Matrix& A, const Matrix& B, std::size_t cap) {
  return sigma_min(sylvester_kron_operator(A, B, cap));
}

double cond_two(const Matrix& M) {
  const double smin = sigma_min(M);
  if (smin == 0.0) return std::numeric_limits<double>::infinity();
  return norm(M, NormKind::two) / smin;
}

}  // namespace mpsylv
