#pragma once

// Leading-order flop model of the two-precision solvers.
//
// alpha = m^3 + n^3, beta = mn(m + n), gamma = n^3 (Lyapunov, m = n).
// rho is the cost of one low-precision flop relative to a high-precision one.

#include <cstddef>
#include <span>
#include <string>

namespace mpsylv {

enum class Algorithm { mp_orth_sylv, mp_orth_lyap, mp_inv_sylv, mp_inv_lyap };

std::string to_string(Algorithm a);

struct CostModel {
  std::size_t m = 1;
  std::size_t n = 1;
  double rho = 0.0;
  Algorithm algorithm = Algorithm::mp_orth_sylv;

  /// Throws std::invalid_argument unless m, n >= 1 and 0 <= rho <= 1.
  void validate() const;
};

struct FlopCount {
  double low = 0.0;
  double high = 0.0;

  /// rho * low + high, in units of high-precision flops.
  double weighted(double rho) const { return rho * low + high; }
};

/// Largest number of refinement steps for which the mixed-precision solver
/// is no more expensive than the high-precision direct solver, as a real.
/// May be negative.
double phi(const CostModel& cm);

/// floor(phi); negative values are reported as -1.
int k_star(const CostModel& cm);

/// Flops of the mixed-precision solver after k refinement steps.
FlopCount flops(Algorithm a, std::size_t m, std::size_t n, int k);

enum class GmresVariant { ug_low, ug_high };

/// Flops of Schur-preconditioned GMRES-IR with k outer steps and ell[i]
/// inner GMRES steps at outer step i.
FlopCount flops_gmres_ir(GmresVariant v, bool lyapunov, std::size_t m, std::size_t n,
                         std::span<const int> ell);

/// High-precision Bartels-Stewart: 25 alpha + 5 beta (Sylvester), 35 n^3
/// (Lyapunov), 26 n^3 (Hermitian eigen-solver).
double bartels_stewart_flops(std::size_t m, std::size_t n);
double bartels_stewart_lyapunov_flops(std::size_t n);
double hermitian_solver_flops(std::size_t n);

struct Crossover {
  double rho;
  bool clamped;  ///< the unclamped root fell outside [0, 1]
};

/// The rho at which phi(rho) = k.
Crossover crossover_rho(Algorithm a, std::size_t m, std::size_t n, int k);

}  // namespace mpsylv
