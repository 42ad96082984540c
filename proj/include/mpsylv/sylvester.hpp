#pragma once

// Direct solvers for A X + X B = C.

#include "mpsylv/linalg.hpp"
#include "mpsylv/matrix.hpp"
#include "mpsylv/precision.hpp"

namespace mpsylv {

enum class EquationKind {
  general,
  lyapunov,   ///< B = A^*
  hermitian,  ///< A = A^*, B = B^*
};

struct SylvesterProblem {
  Matrix A;  ///< m x m
  Matrix B;  ///< n x n
  Matrix C;  ///< m x n
  EquationKind kind = EquationKind::general;

  std::size_t m() const { return A.rows(); }
  std::size_t n() const { return B.rows(); }

  static SylvesterProblem general(Matrix A, Matrix B, Matrix C);
  /// A X + X A^* = C.
  static SylvesterProblem lyapunov(Matrix A, Matrix C);
  static SylvesterProblem hermitian(Matrix A, Matrix B, Matrix C);

  /// Checks shapes and the structure implied by `kind` with tolerance
  /// 10 u ||A||_F.  Throws DimensionError or NotHermitianError.
  void validate(double u = formats::binary64.unit_roundoff()) const;
};

/// ||AX + XB - C||_F / (||C||_F + ||X||_F (||A||_F + ||B||_F)), in binary64.
struct ResidualMetric {
  double value = 0.0;
};

ResidualMetric residual(const SylvesterProblem& p, const Matrix& X);

/// ||C||_F / sep_F(A, -B): an upper bound on ||X||_F (diagnostic only).
double solution_norm_bound(const SylvesterProblem& p);

/// Solves T_A Y + Y T_B = C for upper-triangular T_A, T_B, column by column
/// in ascending order.  Throws SingularEquationError when a shifted diagonal
/// entry T_A(i,i) + T_B(j,j) is exactly zero and NumericBreakdownError when a
/// non-finite value appears.
Matrix solve_sylv_tri(const Matrix& TA, const Matrix& TB, const Matrix& C,
                      const PrecisionContext& ctx);

struct DirectSolution {
  Matrix X;
  ResidualMetric residual;
};

/// Schur-decompose, transform, solve the triangular equation, transform
/// back; every step in ctx.  A declared Lyapunov problem uses a single Schur
/// decomposition.
DirectSolution bartels_stewart(const SylvesterProblem& p, const PrecisionContext& ctx);

/// Eigendecompose both Hermitian coefficients and divide entrywise.
DirectSolution solve_hermitian(const SylvesterProblem& p, const PrecisionContext& ctx);

/// Schur factors of B when B = A^* and A = U T U^*: (U J, J T^* J), with J the
/// exchange matrix, so the triangular factor stays upper triangular.
SchurFactors lyapunov_partner(const SchurFactors& sfA);

}  // namespace mpsylv
