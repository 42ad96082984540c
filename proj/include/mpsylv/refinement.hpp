#pragma once

// Two-precision solvers built on a stationary refinement of the perturbed
// triangular equation
//
//   (T_A + dT_A) Y + Y (T_B + dT_B) = C~,
//
// where T_A, T_B come from Schur decompositions computed in the low
// precision u_l and the correction equations are solved in the high
// precision u_h.

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mpsylv/linalg.hpp"
#include "mpsylv/sylvester.hpp"

namespace mpsylv {

struct RefinementConfig {
  double epsilon = 1e-12;  ///< stop when ||D_{i-1}||_F / ||Y_i||_F <= epsilon
  int max_iter = 20;
  FpFormat u_l = formats::binary32;
  FpFormat u_h = formats::binary64;
  /// Start the refinement from Y0 = 0 instead of the low-precision solve.
  bool y0_zero = false;
  /// Keep every iterate in the report (used by equivalence tests).
  bool record_iterates = false;

  /// max_iter = 20 and epsilon = 1e-12 max(m,n) for binary64 u_h, otherwise
  /// epsilon = 1e4 u_h max(m,n).
  static RefinementConfig defaults(std::size_t m, std::size_t n, FpFormat u_l,
                                   FpFormat u_h = formats::binary64);

  /// Throws std::invalid_argument unless u_h <= u_l, epsilon > 0, max_iter > 0.
  void validate() const;
};

enum class FailureKind {
  singular_equation,
  numeric_breakdown,
  not_converged,
  schur_failure,
  singular_factor,
  rank_deficient,
  overflow,
  stagnation,
};

std::string to_string(FailureKind kind);

struct Failure {
  FailureKind kind;
  std::string stage;  ///< e.g. "schur", "initial_solve", "refinement"
  std::string message;
};

struct FlopTally {
  std::uint64_t low = 0;
  std::uint64_t high = 0;
};

struct SolveReport {
  Matrix X;
  int iterations = 0;
  std::vector<double> correction_norms;  ///< ||D_i||_F
  ResidualMetric residual{std::numeric_limits<double>::quiet_NaN()};
  bool converged = false;
  std::optional<Failure> failure;
  FlopTally flops;
  std::vector<Matrix> iterates;  ///< Y_1, Y_2, ... when record_iterates is set
};

/// Stationary refinement of the perturbed triangular equation, every step in
/// `ctx` (the high precision).  The report's X is Y and its residual is the
/// binary64 residual metric of the perturbed equation.  A run that reaches
/// max_iter returns the iterate with the smallest following correction.
SolveReport solve_pert_sylv_tri_stat(const Matrix& TA, const Matrix& dTA, const Matrix& TB,
                                     const Matrix& dTB, const Matrix& Ct, const Matrix& Y0,
                                     const RefinementConfig& cfg, const PrecisionContext& ctx);

struct LinearIrReport {
  std::vector<Complex> x;
  int iterations = 0;
  std::vector<double> correction_norms;
  bool converged = false;
  std::optional<Failure> failure;
  std::vector<std::vector<Complex>> iterates;
};

/// Fixed-precision refinement for M x = b whose correction solves use
/// (M - dM), factored once.  All arithmetic in ctx.
LinearIrReport ir_linear_system(const Matrix& M, const Matrix& dM, std::span<const Complex> b,
                                std::span<const Complex> x0, const RefinementConfig& cfg,
                                const PrecisionContext& ctx);

/// Orthonormalization-based solver: Schur in u_l, MGS re-orthonormalization
/// of the Schur vectors in u_h, stationary refinement in u_h.
SolveReport mp_orth(const SylvesterProblem& p, const RefinementConfig& cfg);

/// Inversion-based solver: Schur in u_l, LU factors of the Schur vectors in
/// u_h, stationary refinement in u_h.
SolveReport mp_inv(const SylvesterProblem& p, const RefinementConfig& cfg);

struct ConvergenceRegime {
  double kappa_threshold;  ///< approximate bound on kappa_inf(M)
  double expected_backward;
  double expected_forward_factor;  ///< multiplies cond(M, x)
  bool in_regime;
};

/// Condition-number regime under which refinement with (u_l, u_h) is
/// expected to reach a backward error of order u_h.
ConvergenceRegime check_convergence_regime(const FpFormat& u_l, const FpFormat& u_h,
                                           double kappa_inf);

}  // namespace mpsylv
