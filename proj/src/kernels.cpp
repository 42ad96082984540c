#include <cmath>

#include "mpsylv/errors.hpp"
#include "mpsylv/linalg.hpp"

namespace mpsylv {

namespace {

void check_gemm_dims(const Matrix& A, const Matrix& B, Complex beta, const Matrix& C) {
  if (A.cols() != B.rows()) throw DimensionError("gemm: inner dimensions disagree");
  if (beta != Complex{} && (C.rows() != A.rows() || C.cols() != B.cols())) {
    throw DimensionError("gemm: C has the wrong shape");
  }
}

// One output column.  Shared by the serial and parallel drivers so both
// produce identical bits.
inline void gemm_column(Complex alpha, const Matrix& A, const Matrix& B, Complex beta,
                        const Matrix& C, Matrix& out, std::size_t j,
                        const PrecisionContext& ctx) {
  const std::size_t m = A.rows();
  const std::size_t inner = A.cols();
  const bool use_beta = beta != Complex{};
  for (std::size_t i = 0; i < m; ++i) {
    Complex s{};
    for (std::size_t k = 0; k < inner; ++k) s = ctx.add(s, ctx.mul(A(i, k), B(k, j)));
    if (alpha != Complex{1.0, 0.0}) s = ctx.mul(alpha, s);
    if (use_beta) s = ctx.add(s, ctx.mul(beta, C(i, j)));
    out(i, j) = s;
  }
}

void charge_gemm(const Matrix& A, const Matrix& B, const PrecisionContext& ctx) {
  ctx.count(2ULL * A.rows() * A.cols() * B.cols());
}

}  // namespace

Matrix gemm_reference(Complex alpha, const Matrix& A, const Matrix& B, Complex beta,
                      const Matrix& C, const PrecisionContext& ctx) {
  check_gemm_dims(A, B, beta, C);
  Matrix out(A.rows(), B.cols());
  for (std::size_t j = 0; j < B.cols(); ++j) gemm_column(alpha, A, B, beta, C, out, j, ctx);
  charge_gemm(A, B, ctx);
  return out;
}

Matrix gemm(Complex alpha, const Matrix& A, const Matrix& B, Complex beta, const Matrix& C,
            const PrecisionContext& ctx) {
  check_gemm_dims(A, B, beta, C);
  Matrix out(A.rows(), B.cols());
  const auto ncols = static_cast<std::ptrdiff_t>(B.cols());
  // Small products are not worth a parallel region.
  const bool parallel = A.rows() * A.cols() * B.cols() >= 32768;
#pragma omp parallel for schedule(static) if (parallel)
  for (std::ptrdiff_t j = 0; j < ncols; ++j) {
    gemm_column(alpha, A, B, beta, C, out, static_cast<std::size_t>(j), ctx);
  }
  charge_gemm(A, B, ctx);
  return out;
}

Matrix multiply(const Matrix& A, const Matrix& B, const PrecisionContext& ctx) {
  return gemm(1.0, A, B, 0.0, Matrix{}, ctx);
}

Matrix add(const Matrix& A, const Matrix& B, const PrecisionContext& ctx) {
  if (A.rows() != B.rows() || A.cols() != B.cols()) throw DimensionError("add");
  Matrix out(A.rows(), A.cols());
  for (std::size_t k = 0; k < A.size(); ++k) out.data()[k] = ctx.add(A.data()[k], B.data()[k]);
  ctx.count(A.size());
  return out;
}

Matrix subtract(const Matrix& A, const Matrix& B, const PrecisionContext& ctx) {
  if (A.rows() != B.rows() || A.cols() != B.cols()) throw DimensionError("subtract");
  Matrix out(A.rows(), A.cols());
  for (std::size_t k = 0; k < A.size(); ++k) out.data()[k] = ctx.sub(A.data()[k], B.data()[k]);
  ctx.count(A.size());
  return out;
}

double frobenius_norm(const Matrix& M, const PrecisionContext& ctx) {
  double r = 0.0;
  for (std::size_t k = 0; k < M.size(); ++k) r = ctx.hypot(r, ctx.abs(M.data()[k]));
  return r;
}

double norm(const Matrix& M, NormKind kind) {
  switch (kind) {
    case NormKind::frobenius: {
      // scaled sum of squares
      double scale = 0.0;
      double ssq = 1.0;
      for (std::size_t k = 0; k < M.size(); ++k) {
        for (double part : {M.data()[k].real(), M.data()[k].imag()}) {
          const double a = std::fabs(part);
          if (a == 0.0) continue;
          if (scale < a) {
            ssq = 1.0 + ssq * (scale / a) * (scale / a);
            scale = a;
          } else {
            ssq += (a / scale) * (a / scale);
          }
        }
      }
      return scale * std::sqrt(ssq);
    }
    case NormKind::inf: {
      double best = 0.0;
      for (std::size_t i = 0; i < M.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < M.cols(); ++j) s += std::abs(M(i, j));
        best = std::max(best, s);
      }
      return best;
    }
    case NormKind::one: {
      double best = 0.0;
      for (std::size_t j = 0; j < M.cols(); ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < M.rows(); ++i) s += std::abs(M(i, j));
        best = std::max(best, s);
      }
      return best;
    }
    case NormKind::two: {
      if (M.empty()) return 0.0;
      const double fro = norm(M, NormKind::frobenius);
      if (fro == 0.0) return 0.0;
      // power iteration on M^*M; start from a fixed vector with no symmetry
      std::vector<Complex> x(M.cols());
      for (std::size_t k = 0; k < x.size(); ++k)
        x[k] = Complex(1.0 + 0.1 * static_cast<double>(k), 0.05 * static_cast<double>(k % 3));
      double sigma = 0.0;
      for (int it = 0; it < 1000; ++it) {
        double xn = 0.0;
        for (auto z : x) xn += std::norm(z);
        xn = std::sqrt(xn);
        for (auto& z : x) z /= xn;
        std::vector<Complex> y(M.rows());
        for (std::size_t j = 0; j < M.cols(); ++j)
          for (std::size_t i = 0; i < M.rows(); ++i) y[i] += M(i, j) * x[j];
        std::vector<Complex> z(M.cols());
        for (std::size_t j = 0; j < M.cols(); ++j)
          for (std::size_t i = 0; i < M.rows(); ++i) z[j] += std::conj(M(i, j)) * y[i];
        double yn = 0.0;
        for (auto v : y) yn += std::norm(v);
        const double next = std::sqrt(yn);
        x = std::move(z);
        if (it > 0 && std::fabs(next - sigma) <= 1e-10 * next) return next;
        sigma = next;
        if (sigma == 0.0) {
          // start vector in the null space; perturb it
          for (std::size_t k = 0; k < x.size(); ++k) x[k] = Complex(1.0, static_cast<double>(k));
        }
      }
      return sigma;
    }
  }
  return 0.0;
}

}  // namespace mpsylv
