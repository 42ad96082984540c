#include "mpsylv/gmresir.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "mpsylv/errors.hpp"

namespace mpsylv {

void GmresConfig::validate(const RefinementConfig& rcfg) const {
  if (restart < 1) throw std::invalid_argument("gmres: restart must be >= 1");
  if (max_restarts < 1) throw std::invalid_argument("gmres: max_restarts must be >= 1");
  if (!(inner_tol > 0.0)) throw std::invalid_argument("gmres: inner_tol must be positive");
  if (!(u_g == rcfg.u_l) && !(u_g == rcfg.u_h)) {
    throw std::invalid_argument("gmres: u_g must equal u_l or u_h");
  }
}

Matrix apply_preconditioner(const Matrix& W, const SchurFactors& sfA, const SchurFactors& sfB,
                            const PrecisionContext& ctx) {
  if (W.rows() != sfA.T.rows() || W.cols() != sfB.T.rows()) {
    throw DimensionError("apply_preconditioner: inconsistent shapes");
  }
  Matrix V = multiply(multiply(sfA.U.adjoint(), W, ctx), sfB.U, ctx);
  V = solve_sylv_tri(sfA.T, sfB.T, V, ctx);
  return multiply(multiply(sfA.U, V, ctx), sfB.U.adjoint(), ctx);
}

Matrix apply_sylvester_operator(const Matrix& A, const Matrix& B, const Matrix& W,
                                const PrecisionContext& ctx) {
  const Matrix AW = multiply(A, W, ctx);
  return gemm(Complex(1.0), W, B, Complex(1.0), AW, ctx);
}

namespace {

Complex dot(const Matrix& v, const Matrix& w, const PrecisionContext& ctx) {
  Complex s{};
  const auto a = v.vec();
  const auto b = w.vec();
  for (std::size_t i = 0; i < a.size(); ++i) s = ctx.add(s, ctx.mul(std::conj(a[i]), b[i]));
  ctx.count(2 * a.size());
  return s;
}

// w -= h v
void axpy(Matrix& w, Complex h, const Matrix& v, const PrecisionContext& ctx) {
  auto a = w.vec();
  const auto b = v.vec();
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = ctx.sub(a[i], ctx.mul(h, b[i]));
  ctx.count(2 * a.size());
}

Matrix scaled(const Matrix& v, double by, const PrecisionContext& ctx) {
  Matrix out(v.rows(), v.cols());
  for (std::size_t i = 0; i < v.size(); ++i) out.vec()[i] = ctx.div(v.vec()[i], by);
  ctx.count(v.size());
  return out;
}

struct Givens {
  double c = 1.0;
  Complex s{};
};

// Rotation taking (a, b) to (r, 0).
Givens make_givens(Complex a, Complex b, const PrecisionContext& ctx) {
  const double na = ctx.abs(a);
  const double nb = ctx.abs(b);
  if (nb == 0.0) return {1.0, Complex{}};
  if (na == 0.0) return {0.0, ctx.div(std::conj(b), nb)};
  const double nu = ctx.hypot(na, nb);
  const Complex phase = ctx.div(a, na);
  return {ctx.div(na, nu), ctx.div(ctx.mul(phase, std::conj(b)), nu)};
}

void apply_givens(const Givens& g, Complex& x, Complex& y, const PrecisionContext& ctx) {
  const Complex nx = ctx.add(ctx.mul(g.c, x), ctx.mul(g.s, y));
  const Complex ny = ctx.sub(ctx.mul(g.c, y), ctx.mul(std::conj(g.s), x));
  x = nx;
  y = ny;
}

}  // namespace

GmresResult gmres_solve(const LinearOperator& op, const Matrix& b, const Matrix& x0,
                        const GmresConfig& cfg, const PrecisionContext& ctx) {
  if (x0.rows() != b.rows() || x0.cols() != b.cols()) {
    throw DimensionError("gmres_solve: x0 and b differ in shape");
  }
  const int p = cfg.restart;
  GmresResult res;
  res.x = x0;
  const double bnorm = frobenius_norm(b, ctx);
  if (bnorm == 0.0) {
    res.x = Matrix(b.rows(), b.cols());
    res.converged = true;
    return res;
  }
  const double target = cfg.inner_tol * bnorm;
  Matrix r = frobenius_norm(x0, ctx) == 0.0 ? b : subtract(b, op(res.x), ctx);

  for (int cycle = 0; cycle < cfg.max_restarts; ++cycle) {
    const double beta = frobenius_norm(r, ctx);
    res.residual_norm = beta;
    if (!std::isfinite(beta)) break;
    if (beta <= target) {
      res.converged = true;
      break;
    }

    std::vector<Matrix> V;
    V.reserve(p + 1);
    V.push_back(scaled(r, beta, ctx));
    std::vector<std::vector<Complex>> H(p, std::vector<Complex>(p + 1));  // column-wise
    std::vector<Givens> rot(p);
    std::vector<Complex> g(p + 1);
    g[0] = beta;
    int steps = 0;
    bool done = false;
    for (int j = 0; j < p; ++j) {
      Matrix w = op(V[j]);
      auto& h = H[j];
      for (int i = 0; i <= j; ++i) {
        h[i] = dot(V[i], w, ctx);
        axpy(w, h[i], V[i], ctx);
      }
      const double hn = frobenius_norm(w, ctx);
      h[j + 1] = hn;
      for (int i = 0; i < j; ++i) apply_givens(rot[i], h[i], h[i + 1], ctx);
      rot[j] = make_givens(h[j], h[j + 1], ctx);
      apply_givens(rot[j], h[j], h[j + 1], ctx);
      h[j + 1] = 0.0;
      apply_givens(rot[j], g[j], g[j + 1], ctx);
      ++steps;
      ++res.iterations;
      const double est = std::abs(g[j + 1]);
      res.residual_estimates.push_back(est);
      res.residual_norm = est;
      if (est <= target || hn == 0.0 || !std::isfinite(est)) {
        done = est <= target || hn == 0.0;
        break;
      }
      V.push_back(scaled(w, hn, ctx));
    }

    // Back substitution on the rotated Hessenberg matrix, then x += V y.
    std::vector<Complex> y(steps);
    for (int i = steps - 1; i >= 0; --i) {
      Complex s = g[i];
      for (int k = i + 1; k < steps; ++k) s = ctx.sub(s, ctx.mul(H[k][i], y[k]));
      y[i] = ctx.div(s, H[i][i]);
    }
    for (int i = 0; i < steps; ++i) axpy(res.x, -y[i], V[i], ctx);

    if (!res.x.all_finite()) break;
    if (done) {
      res.converged = true;
      break;
    }
    // A full cycle that leaves the true residual above 0.9 of its start
    // will not recover on restart.
    r = subtract(b, op(res.x), ctx);
    const double after = frobenius_norm(r, ctx);
    res.residual_norm = after;
    if (after <= target) {
      res.converged = true;
      break;
    }
    if (!(after <= 0.9 * beta)) {
      res.stagnated = true;
      break;
    }
  }
  return res;
}

GmresIrReport gmres_ir_sylv(const SylvesterProblem& p, const SchurFactors& sfA,
                            const SchurFactors& sfB, const RefinementConfig& rcfg,
                            const GmresConfig& gcfg) {
  rcfg.validate();
  gcfg.validate(rcfg);
  p.validate();

  FlopCounter counter;
  const PrecisionContext ctx_h(rcfg.u_h, &counter, FlopBucket::high);
  const FlopBucket gbucket =
      gcfg.u_g == rcfg.u_h ? FlopBucket::high : FlopBucket::low;
  const PrecisionContext ctx_g(gcfg.u_g, &counter, gbucket);

  GmresIrReport rep;
  const std::size_t m = p.m();
  const std::size_t n = p.n();
  const Matrix A = round_matrix(p.A, rcfg.u_h).matrix;
  const Matrix B = round_matrix(p.B, rcfg.u_h).matrix;
  const Matrix C = round_matrix(p.C, rcfg.u_h).matrix;
  const Matrix Ag = round_matrix(A, gcfg.u_g).matrix;
  const Matrix Bg = round_matrix(B, gcfg.u_g).matrix;

  const LinearOperator op = [&](const Matrix& W) {
    return apply_preconditioner(apply_sylvester_operator(Ag, Bg, W, ctx_g), sfA, sfB, ctx_g);
  };

  Matrix X(m, n);
  const Matrix zero(m, n);
  for (int it = 0; it < rcfg.max_iter; ++it) {
    // R = C - A X - X B in u_h
    Matrix R = gemm(Complex(-1.0), A, X, Complex(1.0), C, ctx_h);
    R = gemm(Complex(-1.0), X, B, Complex(1.0), R, ctx_h);

    GmresResult inner;
    try {
      const Matrix Rg = round_matrix(R, gcfg.u_g).matrix;
      const Matrix Z = apply_preconditioner(Rg, sfA, sfB, ctx_g);
      inner = gmres_solve(op, Z, zero, gcfg, ctx_g);
    } catch (const SingularEquationError& e) {
      rep.failure = Failure{FailureKind::singular_equation, "preconditioner", e.what()};
      break;
    } catch (const NumericBreakdownError& e) {
      rep.failure = Failure{FailureKind::numeric_breakdown, "preconditioner", e.what()};
      break;
    }
    rep.inner_iterations.push_back(inner.iterations);
    ++rep.outer_iterations;

    const Matrix& E = inner.x;
    X = add(X, E, ctx_h);
    const double ne = frobenius_norm(E, ctx_h);
    const double nx = frobenius_norm(X, ctx_h);
    rep.correction_norms.push_back(ne);
    rep.residual_history.push_back(residual(p, X).value);
    if (!X.all_finite()) {
      rep.failure = Failure{FailureKind::numeric_breakdown, "gmres", "non-finite iterate"};
      break;
    }
    if (inner.stagnated) {
      rep.failure = Failure{FailureKind::stagnation, "gmres",
                            "restart cycle did not reduce the residual"};
      break;
    }
    if (ne <= rcfg.epsilon * nx) {
      rep.converged = true;
      break;
    }
  }
  if (!rep.converged && !rep.failure) {
    rep.failure = Failure{FailureKind::not_converged, "refinement",
                          "no convergence in " + std::to_string(rcfg.max_iter) + " iterations"};
  }
  rep.X = std::move(X);
  rep.residual = residual(p, rep.X);
  rep.flops = {counter.low.load(), counter.high.load()};
  return rep;
}

GmresIrReport gmres_ir_sylv(const SylvesterProblem& p, const RefinementConfig& rcfg,
                            const GmresConfig& gcfg) {
  rcfg.validate();
  gcfg.validate(rcfg);
  p.validate();
  FlopCounter schur_flops;
  const PrecisionContext ctx_l(rcfg.u_l, &schur_flops, FlopBucket::low);
  SchurFactors sfA, sfB;
  try {
    const RoundedMatrix Al = round_matrix(round_matrix(p.A, rcfg.u_h).matrix, rcfg.u_l);
    const RoundedMatrix Bl = round_matrix(round_matrix(p.B, rcfg.u_h).matrix, rcfg.u_l);
    if (Al.overflow || Bl.overflow) {
      GmresIrReport rep;
      rep.X = Matrix(p.m(), p.n(), Complex(std::numeric_limits<double>::quiet_NaN()));
      rep.failure = Failure{FailureKind::overflow, "round_low", "coefficient overflows u_l"};
      return rep;
    }
    sfA = schur(Al.matrix, ctx_l);
    sfB = p.kind == EquationKind::lyapunov ? lyapunov_partner(sfA) : schur(Bl.matrix, ctx_l);
  } catch (const Error& e) {
    GmresIrReport rep;
    rep.X = Matrix(p.m(), p.n(), Complex(std::numeric_limits<double>::quiet_NaN()));
    rep.failure = Failure{FailureKind::schur_failure, "schur", e.what()};
    rep.flops.low = schur_flops.low.load();
    return rep;
  }
  GmresIrReport rep = gmres_ir_sylv(p, sfA, sfB, rcfg, gcfg);
  rep.flops.low += schur_flops.low.load();
  return rep;
}

}  // namespace mpsylv
