#pragma once

// Dense complex linear algebra executed under a PrecisionContext.
//
// Every kernel rounds each scalar result into the context's format and
// charges its operation count to the context's flop counter.  Helpers that
// take no context (norms, Kronecker forms, condition numbers) are binary64
// diagnostics and oracles.

#include <cstddef>
#include <vector>

#include "mpsylv/matrix.hpp"
#include "mpsylv/precision.hpp"

namespace mpsylv {

// ---------------------------------------------------------------------------
// Products and elementwise updates
// ---------------------------------------------------------------------------

/// alpha*A*B + beta*C, accumulated in ascending k for every entry.  C may be
/// empty when beta == 0.  Parallelized over output columns with OpenMP; the
/// result is bit-identical to gemm_reference.
Matrix gemm(Complex alpha, const Matrix& A, const Matrix& B, Complex beta, const Matrix& C,
            const PrecisionContext& ctx);

/// Single-threaded gemm, kept as the reference implementation for tests and
/// benchmarks.
Matrix gemm_reference(Complex alpha, const Matrix& A, const Matrix& B, Complex beta,
                      const Matrix& C, const PrecisionContext& ctx);

/// A*B in ctx.
Matrix multiply(const Matrix& A, const Matrix& B, const PrecisionContext& ctx);
Matrix add(const Matrix& A, const Matrix& B, const PrecisionContext& ctx);
Matrix subtract(const Matrix& A, const Matrix& B, const PrecisionContext& ctx);

/// Frobenius norm computed in ctx by a chain of rounded hypot operations.
double frobenius_norm(const Matrix& M, const PrecisionContext& ctx);

// ---------------------------------------------------------------------------
// Norms (binary64)
// ---------------------------------------------------------------------------

enum class NormKind { frobenius, inf, one, two };

/// Two-norm by power iteration on M*M (relative tolerance 1e-10, at most
/// 1000 iterations).
double norm(const Matrix& M, NormKind kind);

// ---------------------------------------------------------------------------
// Factorizations
// ---------------------------------------------------------------------------

struct QrFactors {
  Matrix Q;  ///< orthonormal columns
  Matrix R;  ///< upper triangular, real positive diagonal
};

/// Householder QR with the diagonal of R normalized to be positive.
QrFactors householder_qr(const Matrix& A, const PrecisionContext& ctx);
/// Modified Gram-Schmidt QR; R has a positive diagonal by construction.
QrFactors mgs_qr(const Matrix& A, const PrecisionContext& ctx);

struct LuFactors {
  Matrix LU;                       ///< unit L strictly below the diagonal, U on and above
  std::vector<std::size_t> pivot;  ///< row k of P*A is row pivot[k] of A
  PrecisionContext ctx;            ///< precision of the factorization
};

enum class Side { left, right };
enum class Op { none, conj_transpose };

/// Partial-pivoting LU; throws SingularMatrixError on an exactly zero pivot.
LuFactors lu(const Matrix& A, const PrecisionContext& ctx);

/// Solves op(A) X = B (side = left) or X op(A) = B (side = right) with the
/// factors of A.  Right-side solves go through the conjugate-transposed
/// left-side system.
Matrix lu_solve(const LuFactors& F, const Matrix& B, Side side, Op op,
                const PrecisionContext& ctx);

/// Complex Schur factors A ~ U T U^*.
struct SchurFactors {
  Matrix U;
  Matrix T;
  FpFormat computed_in{formats::binary64};
};

/// Householder Hessenberg reduction followed by single-shift QR iteration
/// with Wilkinson shifts.  A subdiagonal entry is set to zero once
/// |h(k+1,k)| <= u (|h(k,k)| + |h(k+1,k+1)|).  Throws IterationLimitError
/// after 30*m sweeps without full deflation.
SchurFactors schur(const Matrix& A, const PrecisionContext& ctx);

struct HermitianEig {
  Matrix U;
  std::vector<double> d;
};

/// Cyclic Jacobi.  Throws NotHermitianError when ||A - A^*||_F exceeds
/// 10 u ||A||_F and IterationLimitError after 30 sweeps.
HermitianEig hermitian_eig(const Matrix& A, const PrecisionContext& ctx);

// ---------------------------------------------------------------------------
// Kronecker forms and conditioning diagnostics (binary64)
// ---------------------------------------------------------------------------

inline constexpr std::size_t kDefaultKroneckerCap = 4096;

/// A (x) B.
Matrix kron_matrix(const Matrix& A, const Matrix& B);

/// M_f = I_n (x) A + B^T (x) I_m, acting on column-stacked vec(X).  Throws
/// KroneckerCapError when m*n exceeds `cap`.
Matrix sylvester_kron_operator(const Matrix& A, const Matrix& B,
                               std::size_t cap = kDefaultKroneckerCap);

/// Dense solve M x = b in binary64 (LU with partial pivoting).
std::vector<Complex> dense_solve(const Matrix& M, std::span<const Complex> b);

/// Explicit inverse via LU in binary64.
Matrix inverse(const Matrix& M);

/// kappa_inf(M) = ||M||_inf ||M^-1||_inf.
double cond_inf(const Matrix& M);

/// Smallest singular value by inverse power iteration on M^*M (relative
/// tolerance 1e-8).  Returns 0 for an exactly singular M.
double sigma_min(const Matrix& M);

/// sep_F(A, -B) = sigma_min(I (x) A + B^T (x) I).
double sep_f(const Matrix& A, const Matrix& B, std::size_t cap = kDefaultKroneckerCap);

/// kappa_2(M) = ||M||_2 / sigma_min(M); +inf for singular M.
double cond_two(const Matrix& M);

}  // namespace mpsylv
