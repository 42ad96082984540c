// mpsylv: solve, sweep and benchmark Sylvester equations in two precisions.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "mpsylv/experiments.hpp"

namespace {

using namespace mpsylv;

FpFormat format_or_throw(const std::string& text) {
  const auto f = parse_format(text);
  if (!f) throw CLI::ValidationError("unknown floating-point format: " + text);
  return *f;
}

struct Options {
  std::size_t m = 10;
  std::size_t n = 10;
  double t = 0.0;
  std::string t_range = "0:15";
  std::string ul = "binary32";
  std::string uh = "binary64";
  std::string ug;
  std::uint64_t seed = 1;
  int max_iter = 20;
  double epsilon = 0.0;
  std::string solvers = "or,in,gmres-ul,gmres-uh,bs";
  std::string out;
  bool reproducible = false;
  std::vector<std::string> matrix_market;
  std::string generator = "logspace-conditioned";
  std::string similarity = "orthonormal";
  bool y0_zero = false;
  int restart = 20;
  double inner_tol = 1e-8;
  int max_restarts = 10;
  double rho_step = 0.01;
};

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--m", o.m, "rows of X (order of A)")->check(CLI::PositiveNumber);
  sub->add_option("--n", o.n, "columns of X (order of B)")->check(CLI::PositiveNumber);
  sub->add_option("--ul", o.ul, "low precision: bfloat16, binary16, tf32, b24, binary32, binary64 or t,e");
  sub->add_option("--uh", o.uh, "high precision");
  sub->add_option("--ug", o.ug, "GMRES precision (u_l or u_h) for solve/bench");
  sub->add_option("--seed", o.seed, "generator seed");
  sub->add_option("--max-iter", o.max_iter, "refinement iteration limit")->check(CLI::PositiveNumber);
  sub->add_option("--epsilon", o.epsilon, "refinement tolerance (default depends on m, n, u_h)");
  sub->add_option("--solvers", o.solvers, "comma-separated subset of or,in,gmres-ul,gmres-uh,bs");
  sub->add_option("--out", o.out, "output CSV path (default stdout)");
  sub->add_flag("--reproducible", o.reproducible, "omit the timestamp line");
  sub->add_option("--generator", o.generator,
                  "random-dense, logspace-conditioned, hermitian or lyapunov");
  sub->add_option("--similarity", o.similarity,
                  "orthonormal (kappa_2(M_f) = 10^t) or listing (raw random similarity)");
  sub->add_flag("--y0-zero", o.y0_zero, "start refinement from Y0 = 0");
  sub->add_option("--restart", o.restart, "GMRES restart length")->check(CLI::PositiveNumber);
  sub->add_option("--inner-tol", o.inner_tol, "GMRES relative tolerance");
  sub->add_option("--max-restarts", o.max_restarts, "GMRES restart cycles")->check(CLI::PositiveNumber);
}

ExperimentSpec to_spec(const Options& o, Command cmd) {
  ExperimentSpec s;
  s.command = cmd;
  s.kind = parse_generator_kind(o.generator);
  s.similarity = parse_similarity(o.similarity);
  s.m = o.m;
  s.n = o.n;
  s.t = o.t;
  const auto colon = o.t_range.find(':');
  if (colon == std::string::npos) throw CLI::ValidationError("--t-range expects a:b");
  s.t_first = std::stoi(o.t_range.substr(0, colon));
  s.t_last = std::stoi(o.t_range.substr(colon + 1));
  s.seed = o.seed;
  s.u_l = format_or_throw(o.ul);
  s.u_h = format_or_throw(o.uh);
  if (!o.ug.empty()) s.u_g = format_or_throw(o.ug);
  s.max_iter = o.max_iter;
  if (o.epsilon > 0.0) s.epsilon = o.epsilon;
  s.y0_zero = o.y0_zero;
  s.gmres.restart = o.restart;
  s.gmres.inner_tol = o.inner_tol;
  s.gmres.max_restarts = o.max_restarts;
  s.solvers = parse_solver_list(o.solvers);
  if (s.u_g && (cmd == Command::solve || cmd == Command::bench)) {
    // --ug selects the single GMRES variant that matches it
    for (auto& id : s.solvers) {
      if (id == SolverId::gmres_ul || id == SolverId::gmres_uh)
        id = *s.u_g == s.u_l ? SolverId::gmres_ul : SolverId::gmres_uh;
    }
  }
  s.rho_step = o.rho_step;
  s.reproducible = o.reproducible;
  if (!o.matrix_market.empty()) s.matrix_market = MatrixMarketInput{o.matrix_market[0], o.matrix_market[1], o.matrix_market[2]};
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-precision Sylvester and Lyapunov solvers"};
  app.require_subcommand(1);
  Options o;

  auto* solve = app.add_subcommand("solve", "solve one problem with each selected solver");
  add_common(solve, o);
  solve->add_option("--t", o.t, "conditioning exponent of the generated problem");
  solve->add_option("--matrix-market", o.matrix_market, "A B C Matrix Market files")->expected(3);

  auto* sweep = app.add_subcommand("sweep-cond", "residuals over a range of conditioning exponents");
  add_common(sweep, o);
  sweep->add_option("--t-range", o.t_range, "inclusive integer range a:b");

  auto* cost = app.add_subcommand("sweep-costmodel", "phi and k* over a grid of flop ratios");
  add_common(cost, o);
  cost->add_option("--rho-step", o.rho_step, "grid spacing in rho");

  auto* bench = app.add_subcommand("bench", "instrumented flop counts against the cost model");
  add_common(bench, o);
  bench->add_option("--t", o.t, "conditioning exponent of the generated problem");
  bench->add_option("--matrix-market", o.matrix_market, "A B C Matrix Market files")->expected(3);

  CLI11_PARSE(app, argc, argv);

  try {
    Command cmd = Command::solve;
    if (sweep->parsed()) cmd = Command::sweep_cond;
    if (cost->parsed()) cmd = Command::sweep_costmodel;
    if (bench->parsed()) cmd = Command::bench;
    const ExperimentSpec spec = to_spec(o, cmd);

    std::ofstream file;
    if (!o.out.empty()) {
      file.open(o.out, std::ios::binary);
      if (!file) {
        std::cerr << "mpsylv: cannot write " << o.out << "\n";
        return 1;
      }
    }
    std::ostream& out = o.out.empty() ? std::cout : file;
    switch (cmd) {
      case Command::solve:
        run_solve(spec, out);
        break;
      case Command::sweep_cond:
        run_sweep_cond(spec, out);
        break;
      case Command::sweep_costmodel:
        run_sweep_costmodel(spec, out);
        break;
      case Command::bench:
        run_bench(spec, out);
        break;
    }
    out.flush();
    if (!out) {
      std::cerr << "mpsylv: write failed\n";
      return 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "mpsylv: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
