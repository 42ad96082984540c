#include "mpsylv/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "mpsylv/costmodel.hpp"
#include "mpsylv/errors.hpp"
#include "mpsylv/mmio.hpp"

namespace mpsylv {

std::string to_string(SolverId s) {
  switch (s) {
    case SolverId::orth:
      return "or";
    case SolverId::inv:
      return "in";
    case SolverId::gmres_ul:
      return "gmres-ul";
    case SolverId::gmres_uh:
      return "gmres-uh";
    case SolverId::bs:
      return "bs";
  }
  return "unknown";
}

std::vector<SolverId> parse_solver_list(std::string_view text) {
  std::vector<SolverId> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    const std::string_view tok = text.substr(pos, comma - pos);
    if (tok == "or")
      out.push_back(SolverId::orth);
    else if (tok == "in")
      out.push_back(SolverId::inv);
    else if (tok == "gmres-ul")
      out.push_back(SolverId::gmres_ul);
    else if (tok == "gmres-uh")
      out.push_back(SolverId::gmres_uh);
    else if (tok == "bs")
      out.push_back(SolverId::bs);
    else
      throw std::invalid_argument("unknown solver: " + std::string(tok));
    pos = comma + 1;
  }
  return out;
}

RefinementConfig ExperimentSpec::refinement_config(std::size_t mm, std::size_t nn) const {
  RefinementConfig cfg = RefinementConfig::defaults(mm, nn, u_l, u_h);
  cfg.max_iter = max_iter;
  if (epsilon) cfg.epsilon = *epsilon;
  cfg.y0_zero = y0_zero;
  return cfg;
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

std::string status_of(const std::optional<Failure>& f) {
  return f ? to_string(f->kind) : "ok";
}

bool contains(const std::vector<SolverId>& v, SolverId s) {
  for (SolverId x : v)
    if (x == s) return true;
  return false;
}

}  // namespace

SolverOutcome run_solver(SolverId s, const SylvesterProblem& p, const ExperimentSpec& spec) {
  SolverOutcome o;
  o.solver = s;
  const RefinementConfig cfg = spec.refinement_config(p.m(), p.n());
  try {
    switch (s) {
      case SolverId::orth:
      case SolverId::inv: {
        const SolveReport r = s == SolverId::orth ? mp_orth(p, cfg) : mp_inv(p, cfg);
        o.residual = r.residual.value;
        o.iterations = r.iterations;
        o.converged = r.converged;
        o.status = status_of(r.failure);
        o.flops = r.flops;
        break;
      }
      case SolverId::gmres_ul:
      case SolverId::gmres_uh: {
        GmresConfig g = spec.gmres;
        g.u_g = s == SolverId::gmres_ul ? spec.u_l : spec.u_h;
        const GmresIrReport r = gmres_ir_sylv(p, cfg, g);
        o.residual = r.residual.value;
        o.iterations = r.outer_iterations;
        o.inner_iterations = r.inner_iterations;
        o.converged = r.converged;
        o.status = status_of(r.failure);
        o.flops = r.flops;
        break;
      }
      case SolverId::bs: {
        FlopCounter counter;
        const PrecisionContext ctx(spec.u_h, &counter, FlopBucket::high);
        const DirectSolution d = bartels_stewart(p, ctx);
        o.residual = d.residual.value;
        o.converged = true;
        o.status = "ok";
        o.flops = {counter.low.load(), counter.high.load()};
        break;
      }
    }
  } catch (const SingularEquationError&) {
    o.residual = kNaN;
    o.status = "singular_equation";
  } catch (const IterationLimitError&) {
    o.residual = kNaN;
    o.status = "schur_failure";
  } catch (const std::exception&) {
    o.residual = kNaN;
    o.status = "error";
  }
  return o;
}

SylvesterProblem spec_problem(const ExperimentSpec& spec) {
  if (spec.matrix_market) {
    Matrix A = read_matrix_market_file(spec.matrix_market->A);
    Matrix B = read_matrix_market_file(spec.matrix_market->B);
    Matrix C = read_matrix_market_file(spec.matrix_market->C);
    return SylvesterProblem::general(std::move(A), std::move(B), std::move(C));
  }
  return generate({spec.kind, spec.m, spec.n, spec.t, spec.seed, spec.similarity});
}

void write_metadata(std::ostream& out, const ExperimentSpec& spec, std::string_view command) {
  out << "# mpsylv " << kVersion << " " << command << "\n";
  if (spec.matrix_market) {
    out << "# problem: matrix-market A=" << spec.matrix_market->A << " B=" << spec.matrix_market->B
        << " C=" << spec.matrix_market->C << "\n";
  } else {
    out << "# generator: " << to_string(spec.kind) << " m=" << spec.m << " n=" << spec.n
        << " similarity=" << to_string(spec.similarity) << " seed=" << spec.seed
        << " rng=" << CounterRng::kAlgorithm << "\n";
  }
  out << "# precisions: u_l=" << spec.u_l.name() << " u_h=" << spec.u_h.name();
  if (spec.u_g) out << " u_g=" << spec.u_g->name();
  out << "\n";
  // without a generated size the default depends on the files' dimensions
  const std::string eps = spec.matrix_market && !spec.epsilon
                              ? std::string("default")
                              : num(spec.refinement_config(spec.m, spec.n).epsilon);
  out << "# refinement: max_iter=" << spec.max_iter << " epsilon=" << eps
      << " y0=" << (spec.y0_zero ? "zero" : "low-precision-solve") << "\n";
  out << "# gmres: restart=" << spec.gmres.restart << " inner_tol=" << num(spec.gmres.inner_tol)
      << " max_restarts=" << spec.gmres.max_restarts << " preconditioning=left\n";
  out << "# algorithms: schur=hessenberg-qr-wilkinson/v1 orth=mgs/v1 inv=lu-partial-pivoting/v1"
         " rounding=round-to-nearest-even/v1\n";
  if (!spec.reproducible) {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    out << "# created: " << buf << "\n";
  }
}

void run_solve(const ExperimentSpec& spec, std::ostream& out) {
  const SylvesterProblem p = spec_problem(spec);
  write_metadata(out, spec, "solve");
  if (!spec.matrix_market) out << "# t=" << num(spec.t) << "\n";
  out << "solver,residual,iterations,converged,status,flops_low,flops_high\n";
  for (SolverId s : spec.solvers) {
    const SolverOutcome o = run_solver(s, p, spec);
    out << to_string(s) << ',' << num(o.residual) << ',' << o.iterations << ','
        << (o.converged ? 1 : 0) << ',' << o.status << ',' << o.flops.low << ','
        << o.flops.high << '\n';
  }
}

void run_sweep_cond(const ExperimentSpec& spec, std::ostream& out) {
  if (spec.t_last < spec.t_first) throw std::invalid_argument("sweep-cond: empty t range");
  const int points = spec.t_last - spec.t_first + 1;
  std::vector<std::string> rows(points);

#pragma omp parallel for schedule(dynamic)
  for (int idx = 0; idx < points; ++idx) {
    const int t = spec.t_first + idx;
    std::ostringstream row;
    row << t << ',';
    std::string status;
    auto note = [&](const std::string& name, const std::string& st) {
      if (st == "ok") return;
      if (!status.empty()) status += ';';
      status += name + "=" + st;
    };
    try {
      const SylvesterProblem p = generate({spec.kind, spec.m, spec.n, static_cast<double>(t), spec.seed,
                                           spec.similarity});
      if (p.m() * p.n() <= kDefaultKroneckerCap) {
        row << num(cond_two(sylvester_kron_operator(p.A, p.B)) * spec.u_h.unit_roundoff());
      }
      row << ',';
      std::string res[5], its[2];
      const SolverId order[5] = {SolverId::bs, SolverId::orth, SolverId::inv, SolverId::gmres_ul,
                                 SolverId::gmres_uh};
      for (int k = 0; k < 5; ++k) {
        if (!contains(spec.solvers, order[k])) continue;
        const SolverOutcome o = run_solver(order[k], p, spec);
        res[k] = num(o.residual);
        if (k == 1) its[0] = std::to_string(o.iterations);
        if (k == 2) its[1] = std::to_string(o.iterations);
        note(to_string(order[k]), o.status);
      }
      row << res[0] << ',' << res[1] << ',' << res[2] << ',' << res[3] << ',' << res[4] << ','
          << its[0] << ',' << its[1] << ',' << (status.empty() ? "ok" : status);
    } catch (const std::exception&) {
      row.str("");
      row << t << ",nan,nan,nan,nan,nan,nan,,,generator_error";
    }
    rows[idx] = row.str();
  }

  write_metadata(out, spec, "sweep-cond");
  out << "# t-range=" << spec.t_first << ":" << spec.t_last
      << " (same seed at every t; condu=kappa_2(M_f)*u_h)\n";
  out << "t,condu,res_sylv,r_or,r_in,r_gmres_ul,r_gmres_uh,i_or,i_in,status\n";
  for (const auto& r : rows) out << r << '\n';
}

void run_sweep_costmodel(const ExperimentSpec& spec, std::ostream& out) {
  if (!(spec.rho_step > 0.0)) throw std::invalid_argument("sweep-costmodel: rho step must be positive");
  write_metadata(out, spec, "sweep-costmodel");
  out << "algorithm,m,n,rho,funk,optk\n";
  const int steps = static_cast<int>(std::floor(1.0 / spec.rho_step + 1e-9));
  const Algorithm algs[4] = {Algorithm::mp_orth_sylv, Algorithm::mp_inv_sylv,
                             Algorithm::mp_orth_lyap, Algorithm::mp_inv_lyap};
  for (Algorithm a : algs) {
    const bool lyap = a == Algorithm::mp_orth_lyap || a == Algorithm::mp_inv_lyap;
    const std::size_t m = lyap ? spec.n : spec.m;
    for (int i = 0; i <= steps; ++i) {
      const double rho = std::min(1.0, i * spec.rho_step);
      const CostModel cm{m, spec.n, rho, a};
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.4f", rho);
      out << to_string(a) << ',' << m << ',' << spec.n << ',' << buf << ',' << num(phi(cm)) << ','
          << k_star(cm) << '\n';
    }
  }
}

void run_bench(const ExperimentSpec& spec, std::ostream& out) {
  const SylvesterProblem p = spec_problem(spec);
  const std::size_t m = p.m();
  const std::size_t n = p.n();
  const bool lyap = p.kind == EquationKind::lyapunov;
  write_metadata(out, spec, "bench");
  out << "# model: leading-order table counts; gmres-ul charges its 7*sum_ell*beta GMRES term "
         "to high although the solver runs it in u_g\n";
  out << "solver,m,n,k,sum_ell,low_measured,low_model,high_measured,high_model,low_ratio,"
         "high_ratio,status\n";
  for (SolverId s : spec.solvers) {
    const SolverOutcome o = run_solver(s, p, spec);
    FlopCount model;
    int sum_ell = 0;
    for (int l : o.inner_iterations) sum_ell += l;
    switch (s) {
      case SolverId::orth:
        model = flops(lyap ? Algorithm::mp_orth_lyap : Algorithm::mp_orth_sylv, m, n, o.iterations);
        break;
      case SolverId::inv:
        model = flops(lyap ? Algorithm::mp_inv_lyap : Algorithm::mp_inv_sylv, m, n, o.iterations);
        break;
      case SolverId::gmres_ul:
      case SolverId::gmres_uh: {
        std::vector<int> ell = o.inner_iterations;
        for (int& l : ell) l = std::max(l, 1);
        model = flops_gmres_ir(s == SolverId::gmres_ul ? GmresVariant::ug_low : GmresVariant::ug_high,
                               lyap, m, n, ell);
        break;
      }
      case SolverId::bs:
        model = {0.0, lyap ? bartels_stewart_lyapunov_flops(n) : bartels_stewart_flops(m, n)};
        break;
    }
    const double lm = static_cast<double>(o.flops.low);
    const double hm = static_cast<double>(o.flops.high);
    out << to_string(s) << ',' << m << ',' << n << ',' << o.iterations << ',' << sum_ell << ','
        << o.flops.low << ',' << num(model.low) << ',' << o.flops.high << ',' << num(model.high)
        << ',' << (model.low > 0 ? num(lm / model.low) : std::string()) << ','
        << (model.high > 0 ? num(hm / model.high) : std::string()) << ',' << o.status << '\n';
  }
}

}  // namespace mpsylv
