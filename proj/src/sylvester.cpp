#include "mpsylv/sylvester.hpp"

#include <cmath>
#include <limits>

#include "mpsylv/errors.hpp"

namespace mpsylv {

SylvesterProblem SylvesterProblem::general(Matrix A, Matrix B, Matrix C) {
  SylvesterProblem p{std::move(A), std::move(B), std::move(C), EquationKind::general};
  p.validate();
  return p;
}

SylvesterProblem SylvesterProblem::lyapunov(Matrix A, Matrix C) {
  Matrix B = A.adjoint();
  SylvesterProblem p{std::move(A), std::move(B), std::move(C), EquationKind::lyapunov};
  p.validate();
  return p;
}

SylvesterProblem SylvesterProblem::hermitian(Matrix A, Matrix B, Matrix C) {
  SylvesterProblem p{std::move(A), std::move(B), std::move(C), EquationKind::hermitian};
  p.validate();
  return p;
}

void SylvesterProblem::validate(double u) const {
  if (!A.is_square() || !B.is_square() || A.empty() || B.empty()) {
    throw DimensionError("Sylvester problem: A and B must be non-empty and square");
  }
  if (C.rows() != A.rows() || C.cols() != B.rows()) {
    throw DimensionError("Sylvester problem: C must be m x n");
  }
  const double tol = 10.0 * u * norm(A, NormKind::frobenius);
  if (kind == EquationKind::lyapunov) {
    if (m() != n() || norm(B - A.adjoint(), NormKind::frobenius) > tol) {
      throw NotHermitianError("Lyapunov problem: B differs from A^*");
    }
  } else if (kind == EquationKind::hermitian) {
    if (norm(A - A.adjoint(), NormKind::frobenius) > tol ||
        norm(B - B.adjoint(), NormKind::frobenius) >
            10.0 * u * norm(B, NormKind::frobenius)) {
      throw NotHermitianError("Hermitian problem: a coefficient is not Hermitian");
    }
  }
}

ResidualMetric residual(const SylvesterProblem& p, const Matrix& X) {
  if (X.rows() != p.m() || X.cols() != p.n()) throw DimensionError("residual: X has the wrong shape");
  const Matrix R = p.A * X + X * p.B - p.C;
  const double den = norm(p.C, NormKind::frobenius) +
                     norm(X, NormKind::frobenius) *
                         (norm(p.A, NormKind::frobenius) + norm(p.B, NormKind::frobenius));
  const double num = norm(R, NormKind::frobenius);
  if (den == 0.0) return {num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity()};
  if (!std::isfinite(num) || !std::isfinite(den)) return {std::numeric_limits<double>::quiet_NaN()};
  return {num / den};
}

double solution_norm_bound(const SylvesterProblem& p) {
  return norm(p.C, NormKind::frobenius) / sep_f(p.A, p.B);
}

Matrix solve_sylv_tri(const Matrix& TA, const Matrix& TB, const Matrix& C,
                      const PrecisionContext& ctx) {
  const std::size_t m = TA.rows();
  const std::size_t n = TB.rows();
  if (!TA.is_square() || !TB.is_square() || C.rows() != m || C.cols() != n) {
    throw DimensionError("solve_sylv_tri: inconsistent shapes");
  }
  Matrix Y(m, n);
  std::uint64_t flops = 0;
  for (std::size_t j = 0; j < n; ++j) {
    auto y = Y.col(j);
    for (std::size_t i = 0; i < m; ++i) {
      Complex s = C(i, j);
      for (std::size_t k = 0; k < j; ++k) s = ctx.sub(s, ctx.mul(TB(k, j), Y(i, k)));
      y[i] = s;
    }
    flops += 2ULL * m * j;
    // (T_A + T_B(j,j) I) y = rhs by back substitution
    const Complex shift = TB(j, j);
    for (std::size_t ii = m; ii-- > 0;) {
      Complex s = y[ii];
      for (std::size_t l = ii + 1; l < m; ++l) s = ctx.sub(s, ctx.mul(TA(ii, l), y[l]));
      const Complex den = ctx.add(TA(ii, ii), shift);
      if (den == Complex{}) {
        ctx.count(flops);
        throw SingularEquationError(ii, j);
      }
      y[ii] = ctx.div(s, den);
      if (!std::isfinite(y[ii].real()) || !std::isfinite(y[ii].imag())) {
        ctx.count(flops);
        throw NumericBreakdownError("solve_sylv_tri: non-finite value at (" +
                                    std::to_string(ii) + "," + std::to_string(j) + ")");
      }
    }
    flops += static_cast<std::uint64_t>(m) * (m + 1);
  }
  ctx.count(flops);
  return Y;
}

SchurFactors lyapunov_partner(const SchurFactors& sfA) {
  return {flip_columns(sfA.U), flip(sfA.T.adjoint()), sfA.computed_in};
}

DirectSolution bartels_stewart(const SylvesterProblem& p, const PrecisionContext& ctx) {
  p.validate();
  const Matrix C = round_matrix(p.C, ctx.format()).matrix;
  const SchurFactors sfA = schur(p.A, ctx);
  const SchurFactors sfB =
      p.kind == EquationKind::lyapunov ? lyapunov_partner(sfA) : schur(p.B, ctx);

  const Matrix Ct = multiply(multiply(sfA.U.adjoint(), C, ctx), sfB.U, ctx);
  const Matrix Y = solve_sylv_tri(sfA.T, sfB.T, Ct, ctx);
  Matrix X = multiply(multiply(sfA.U, Y, ctx), sfB.U.adjoint(), ctx);
  const ResidualMetric r = residual(p, X);
  return {std::move(X), r};
}

DirectSolution solve_hermitian(const SylvesterProblem& p, const PrecisionContext& ctx) {
  if (p.kind != EquationKind::hermitian) {
    throw NotHermitianError("solve_hermitian: problem is not declared Hermitian");
  }
  p.validate();
  const HermitianEig ea = hermitian_eig(p.A, ctx);
  const HermitianEig eb = hermitian_eig(p.B, ctx);
  const Matrix C = round_matrix(p.C, ctx.format()).matrix;

  Matrix Y = multiply(multiply(ea.U.adjoint(), C, ctx), eb.U, ctx);
  for (std::size_t j = 0; j < p.n(); ++j) {
    for (std::size_t i = 0; i < p.m(); ++i) {
      const double den = ctx.add(ea.d[i], eb.d[j]);
      if (den == 0.0) throw SingularEquationError(i, j);
      Y(i, j) = ctx.div(Y(i, j), den);
    }
  }
  ctx.count(2ULL * p.m() * p.n());
  Matrix X = multiply(multiply(ea.U, Y, ctx), eb.U.adjoint(), ctx);
  const ResidualMetric r = residual(p, X);
  return {std::move(X), r};
}

}  // namespace mpsylv
