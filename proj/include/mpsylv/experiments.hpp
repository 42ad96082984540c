#pragma once

// Experiment drivers behind the command-line tool.  Every driver writes CSV
// (LF line endings) preceded by '#' metadata lines.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mpsylv/generator.hpp"
#include "mpsylv/gmresir.hpp"
#include "mpsylv/refinement.hpp"

namespace mpsylv {

inline constexpr std::string_view kVersion = "1.0.0";

enum class Command { solve, sweep_cond, sweep_costmodel, bench };

enum class SolverId { orth, inv, gmres_ul, gmres_uh, bs };

std::string to_string(SolverId s);
/// Parses a comma-separated list such as "or,in,gmres-ul,gmres-uh,bs".
std::vector<SolverId> parse_solver_list(std::string_view text);

struct MatrixMarketInput {
  std::string A, B, C;
};

struct ExperimentSpec {
  Command command = Command::solve;
  GeneratorKind kind = GeneratorKind::logspace_conditioned;
  Similarity similarity = Similarity::orthonormal;
  std::size_t m = 10;
  std::size_t n = 10;
  double t = 0.0;
  int t_first = 0;
  int t_last = 15;
  std::uint64_t seed = 1;
  FpFormat u_l = formats::binary32;
  FpFormat u_h = formats::binary64;
  /// Overrides u_g for `solve`/`bench` when only one GMRES variant is wanted.
  std::optional<FpFormat> u_g;
  int max_iter = 20;
  std::optional<double> epsilon;  ///< default from RefinementConfig::defaults
  bool y0_zero = false;
  GmresConfig gmres;
  std::vector<SolverId> solvers{SolverId::orth, SolverId::inv, SolverId::gmres_ul,
                                SolverId::gmres_uh, SolverId::bs};
  double rho_step = 0.01;
  bool reproducible = false;
  std::optional<MatrixMarketInput> matrix_market;

  RefinementConfig refinement_config(std::size_t m, std::size_t n) const;
};

/// One solver run, flattened for CSV output.
struct SolverOutcome {
  SolverId solver;
  double residual = 0.0;  ///< NaN when the solver failed before producing X
  int iterations = 0;
  std::vector<int> inner_iterations;
  bool converged = false;
  std::string status;  ///< "ok" or the failure kind
  FlopTally flops;
};

SolverOutcome run_solver(SolverId s, const SylvesterProblem& p, const ExperimentSpec& spec);

/// Problem for `solve` and `bench`: Matrix Market files when given,
/// otherwise the generator at (kind, m, n, t, seed).
SylvesterProblem spec_problem(const ExperimentSpec& spec);

void write_metadata(std::ostream& out, const ExperimentSpec& spec, std::string_view command);

void run_solve(const ExperimentSpec& spec, std::ostream& out);
/// Columns t,condu,res_sylv,r_or,r_in,r_gmres_ul,r_gmres_uh,i_or,i_in,status.
/// Points are computed in parallel and written in sweep order.
void run_sweep_cond(const ExperimentSpec& spec, std::ostream& out);
/// Columns algorithm,m,n,rho,funk,optk.
void run_sweep_costmodel(const ExperimentSpec& spec, std::ostream& out);
/// Instrumented flop counts beside the model's predictions.
void run_bench(const ExperimentSpec& spec, std::ostream& out);

}  // namespace mpsylv
