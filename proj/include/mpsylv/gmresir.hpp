#pragma once

// Schur-preconditioned GMRES-based iterative refinement for A X + X B = C.
// Vectors of length mn are kept as m x n matrices; the Kronecker operator is
// never formed.

#include <functional>
#include <optional>
#include <vector>

#include "mpsylv/refinement.hpp"

namespace mpsylv {

struct GmresConfig {
  int restart = 20;
  double inner_tol = 1e-8;  ///< relative residual of the preconditioned system
  int max_restarts = 10;
  /// Precision of the preconditioning and of GMRES; must equal u_l or u_h.
  FpFormat u_g = formats::binary64;

  void validate(const RefinementConfig& rcfg) const;
};

/// V <- U_A^* W U_B, V <- solution of T_A V + V T_B = V, Z <- U_A V U_B^*,
/// i.e. vec(Z) = M_f^{-1} vec(W) for the factored operator.
Matrix apply_preconditioner(const Matrix& W, const SchurFactors& sfA, const SchurFactors& sfB,
                            const PrecisionContext& ctx);

/// W -> A W + W B in ctx.
Matrix apply_sylvester_operator(const Matrix& A, const Matrix& B, const Matrix& W,
                                const PrecisionContext& ctx);

using LinearOperator = std::function<Matrix(const Matrix&)>;

struct GmresResult {
  Matrix x;
  int iterations = 0;                 ///< Arnoldi steps over all cycles
  std::vector<double> residual_estimates;  ///< Givens estimate after each step
  double residual_norm = 0.0;         ///< last internal estimate of ||b - op(x)||
  bool converged = false;
  bool stagnated = false;
};

/// Restarted GMRES with modified Gram-Schmidt Arnoldi and Givens rotations,
/// every operation in ctx.  Stops when the residual estimate falls below
/// inner_tol * ||b||.  A restart cycle that fails to reduce the true residual
/// to 0.9 times its starting value flags stagnation.
GmresResult gmres_solve(const LinearOperator& op, const Matrix& b, const Matrix& x0,
                        const GmresConfig& cfg, const PrecisionContext& ctx);

struct GmresIrReport {
  Matrix X;
  int outer_iterations = 0;
  std::vector<int> inner_iterations;     ///< l_i per outer step
  std::vector<double> residual_history;  ///< residual metric of X_i after each step
  std::vector<double> correction_norms;
  ResidualMetric residual{std::numeric_limits<double>::quiet_NaN()};
  bool converged = false;
  std::optional<Failure> failure;
  FlopTally flops;
};

/// Schur factors in u_l; outer residual and update in u_h; preconditioning
/// and GMRES in u_g.  Convergence uses the stop rule of the stationary
/// refinement (||E_i||_F / ||X_{i+1}||_F <= epsilon), starting from X_0 = 0.
GmresIrReport gmres_ir_sylv(const SylvesterProblem& p, const RefinementConfig& rcfg,
                            const GmresConfig& gcfg);

/// Same iteration with caller-supplied Schur factors (e.g. exact binary64
/// factors for oracle tests).
GmresIrReport gmres_ir_sylv(const SylvesterProblem& p, const SchurFactors& sfA,
                            const SchurFactors& sfB, const RefinementConfig& rcfg,
                            const GmresConfig& gcfg);

}  // namespace mpsylv
