#include "mpsylv/refinement.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <stdexcept>

#include "mpsylv/errors.hpp"

namespace mpsylv {

RefinementConfig RefinementConfig::defaults(std::size_t m, std::size_t n, FpFormat u_l,
                                            FpFormat u_h) {
  RefinementConfig cfg;
  cfg.u_l = u_l;
  cfg.u_h = u_h;
  cfg.max_iter = 20;
  const double dim = static_cast<double>(std::max(m, n));
  cfg.epsilon = u_h == formats::binary64 ? 1e-12 * dim : 1e4 * u_h.unit_roundoff() * dim;
  return cfg;
}

void RefinementConfig::validate() const {
  if (!(epsilon > 0.0)) throw std::invalid_argument("refinement: epsilon must be positive");
  if (max_iter <= 0) throw std::invalid_argument("refinement: max_iter must be positive");
  if (u_h.unit_roundoff() > u_l.unit_roundoff()) {
    throw std::invalid_argument("refinement: u_h must not be coarser than u_l");
  }
}

std::string to_string(FailureKind kind) {
  switch (kind) {
    case FailureKind::singular_equation:
      return "singular_equation";
    case FailureKind::numeric_breakdown:
      return "numeric_breakdown";
    case FailureKind::not_converged:
      return "not_converged";
    case FailureKind::schur_failure:
      return "schur_failure";
    case FailureKind::singular_factor:
      return "singular_factor";
    case FailureKind::rank_deficient:
      return "rank_deficient";
    case FailureKind::overflow:
      return "overflow";
    case FailureKind::stagnation:
      return "stagnation";
  }
  return "unknown";
}

namespace {

Matrix nan_matrix(std::size_t m, std::size_t n) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  return Matrix(m, n, Complex(nan, nan));
}

Matrix rounded(const Matrix& M, const PrecisionContext& ctx) {
  if (ctx.is_exact_binary64()) return M;
  return round_matrix(M, ctx.format()).matrix;
}

// Residual metric of (TA+dTA) Y + Y (TB+dTB) = Ct in binary64.
ResidualMetric perturbed_residual(const Matrix& TAp, const Matrix& TBp, const Matrix& Ct,
                                  const Matrix& Y) {
  SylvesterProblem q{TAp, TBp, Ct, EquationKind::general};
  return residual(q, Y);
}

}  // namespace

SolveReport solve_pert_sylv_tri_stat(const Matrix& TA, const Matrix& dTA, const Matrix& TB,
                                     const Matrix& dTB, const Matrix& Ct, const Matrix& Y0,
                                     const RefinementConfig& cfg, const PrecisionContext& ctx) {
  const std::size_t m = TA.rows();
  const std::size_t n = TB.rows();
  if (!TA.is_square() || !TB.is_square() || dTA.rows() != m || dTA.cols() != m ||
      dTB.rows() != n || dTB.cols() != n || Ct.rows() != m || Ct.cols() != n ||
      Y0.rows() != m || Y0.cols() != n) {
    throw DimensionError("solve_pert_sylv_tri_stat: inconsistent shapes");
  }
  if (cfg.epsilon <= 0.0 || cfg.max_iter <= 0) {
    throw std::invalid_argument("solve_pert_sylv_tri_stat: bad configuration");
  }

  SolveReport rep;
  const Matrix TAp = add(TA, dTA, ctx);
  const Matrix TBp = add(TB, dTB, ctx);
  if (!TAp.all_finite() || !TBp.all_finite() || !Ct.all_finite() || !Y0.all_finite()) {
    rep.X = Y0;
    rep.failure = Failure{FailureKind::numeric_breakdown, "refinement", "non-finite operand"};
    return rep;
  }

  Matrix Y = rounded(Y0, ctx);
  Matrix best = Y;
  double best_ratio = std::numeric_limits<double>::infinity();

  for (int it = 0; it < cfg.max_iter; ++it) {
    // R = Ct - (TA + dTA) Y - Y (TB + dTB)
    Matrix R = gemm(Complex(-1.0), TAp, Y, Complex(1.0), Ct, ctx);
    R = gemm(Complex(-1.0), Y, TBp, Complex(1.0), R, ctx);
    Matrix D;
    try {
      D = solve_sylv_tri(TA, TB, R, ctx);
    } catch (const SingularEquationError& e) {
      rep.failure = Failure{FailureKind::singular_equation, "refinement", e.what()};
      break;
    } catch (const NumericBreakdownError& e) {
      rep.failure = Failure{FailureKind::numeric_breakdown, "refinement", e.what()};
      break;
    }
    Y = add(Y, D, ctx);
    ++rep.iterations;

    const double nd = frobenius_norm(D, ctx);
    const double ny = frobenius_norm(Y, ctx);
    rep.correction_norms.push_back(nd);
    if (cfg.record_iterates) rep.iterates.push_back(Y);
    if (!Y.all_finite() || !std::isfinite(nd)) {
      rep.failure = Failure{FailureKind::numeric_breakdown, "refinement",
                            "non-finite iterate at step " + std::to_string(rep.iterations)};
      break;
    }
    const double ratio = ny > 0.0 ? nd / ny : (nd == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
    if (ratio < best_ratio) {
      best_ratio = ratio;
      best = Y;
    }
    if (ratio <= cfg.epsilon) {
      rep.converged = true;
      break;
    }
  }

  if (rep.converged) {
    rep.X = std::move(Y);
  } else {
    rep.X = std::move(best);
    if (!rep.failure) {
      rep.failure = Failure{FailureKind::not_converged, "refinement",
                            "no convergence in " + std::to_string(cfg.max_iter) + " iterations"};
    }
  }
  rep.residual = perturbed_residual(TAp, TBp, Ct, rep.X);
  return rep;
}

LinearIrReport ir_linear_system(const Matrix& M, const Matrix& dM, std::span<const Complex> b,
                                std::span<const Complex> x0, const RefinementConfig& cfg,
                                const PrecisionContext& ctx) {
  const std::size_t N = M.rows();
  if (!M.is_square() || dM.rows() != N || dM.cols() != N || b.size() != N || x0.size() != N) {
    throw DimensionError("ir_linear_system: inconsistent shapes");
  }
  LinearIrReport rep;
  std::optional<LuFactors> F;
  try {
    F.emplace(lu(subtract(M, dM, ctx), ctx));
  } catch (const SingularMatrixError& e) {
    rep.x.assign(x0.begin(), x0.end());
    rep.failure = Failure{FailureKind::singular_factor, "factorization", e.what()};
    return rep;
  }

  const Matrix bm = Matrix::from_vec(b, N, 1);
  Matrix x = rounded(Matrix::from_vec(x0, N, 1), ctx);
  for (int it = 0; it < cfg.max_iter; ++it) {
    const Matrix r = gemm(Complex(-1.0), M, x, Complex(1.0), bm, ctx);
    const Matrix d = lu_solve(*F, r, Side::left, Op::none, ctx);
    x = add(x, d, ctx);
    ++rep.iterations;
    const double nd = frobenius_norm(d, ctx);
    const double nx = frobenius_norm(x, ctx);
    rep.correction_norms.push_back(nd);
    if (cfg.record_iterates) rep.iterates.emplace_back(x.vec().begin(), x.vec().end());
    if (!x.all_finite()) {
      rep.failure = Failure{FailureKind::numeric_breakdown, "refinement", "non-finite iterate"};
      break;
    }
    if (nd <= cfg.epsilon * nx) {
      rep.converged = true;
      break;
    }
  }
  if (!rep.converged && !rep.failure) {
    rep.failure = Failure{FailureKind::not_converged, "refinement", "iteration limit reached"};
  }
  rep.x.assign(x.vec().begin(), x.vec().end());
  return rep;
}

namespace {

// High-precision transformation steps, the only part in which the two
// mixed-precision solvers differ.
struct Transforms {
  virtual ~Transforms() = default;
  // Builds F, L_A, L_B from the low-precision Schur factors.
  virtual void prepare(const Matrix& A, const Matrix& B, const Matrix& C, const SchurFactors& sfA,
                       const SchurFactors& sfB, bool lyapunov) = 0;
  virtual Matrix recover(const Matrix& Y) = 0;

  Matrix F, LA, LB;
};

class OrthTransforms final : public Transforms {
 public:
  explicit OrthTransforms(const PrecisionContext& ctx) : ctx_(ctx) {}

  void prepare(const Matrix& A, const Matrix& B, const Matrix& C, const SchurFactors& sfA,
               const SchurFactors& sfB, bool lyapunov) override {
    QA_ = mgs_qr(sfA.U, ctx_).Q;
    QB_ = lyapunov ? flip_columns(QA_) : mgs_qr(sfB.U, ctx_).Q;
    F = multiply(multiply(QA_.adjoint(), C, ctx_), QB_, ctx_);
    LA = subtract(multiply(multiply(QA_.adjoint(), A, ctx_), QA_, ctx_), sfA.T, ctx_);
    if (lyapunov) {
      LB = flip(LA.adjoint());
    } else {
      LB = subtract(multiply(multiply(QB_.adjoint(), B, ctx_), QB_, ctx_), sfB.T, ctx_);
    }
  }

  Matrix recover(const Matrix& Y) override {
    return multiply(multiply(QA_, Y, ctx_), QB_.adjoint(), ctx_);
  }

 private:
  PrecisionContext ctx_;
  Matrix QA_, QB_;
};

class InvTransforms final : public Transforms {
 public:
  explicit InvTransforms(const PrecisionContext& ctx) : ctx_(ctx) {}

  void prepare(const Matrix& A, const Matrix& B, const Matrix& C, const SchurFactors& sfA,
               const SchurFactors& sfB, bool lyapunov) override {
    lyapunov_ = lyapunov;
    const Matrix UAh = sfA.U.adjoint();
    FA_.emplace(lu(UAh, ctx_));
    if (!lyapunov) FB_.emplace(lu(sfB.U, ctx_));

    F = multiply(multiply(UAh, C, ctx_), sfB.U, ctx_);
    // L_A = U_A^* A U_A^{-*} - T_A
    LA = subtract(lu_solve(*FA_, multiply(UAh, A, ctx_), Side::right, Op::none, ctx_), sfA.T, ctx_);
    if (lyapunov) {
      LB = flip(LA.adjoint());
    } else {
      // L_B = U_B^{-1} B U_B - T_B
      LB = subtract(lu_solve(*FB_, multiply(B, sfB.U, ctx_), Side::left, Op::none, ctx_), sfB.T,
                    ctx_);
    }
  }

  // X = U_A^{-*} Y U_B^{-1}
  Matrix recover(const Matrix& Y) override {
    const Matrix Z = lu_solve(*FA_, Y, Side::left, Op::none, ctx_);
    if (lyapunov_) {
      // U_B = U_A J, so Z U_B^{-1} = (Z J) U_A^{-1} and U_A = (U_A^*)^*.
      return lu_solve(*FA_, flip_columns(Z), Side::right, Op::conj_transpose, ctx_);
    }
    return lu_solve(*FB_, Z, Side::right, Op::none, ctx_);
  }

 private:
  PrecisionContext ctx_;
  std::optional<LuFactors> FA_;
  std::optional<LuFactors> FB_;
  bool lyapunov_ = false;
};

SolveReport mixed_precision_solve(const SylvesterProblem& p, const RefinementConfig& cfg,
                                  bool inversion) {
  cfg.validate();
  p.validate();

  FlopCounter counter;
  const PrecisionContext ctx_h(cfg.u_h, &counter, FlopBucket::high);
  const PrecisionContext ctx_l(cfg.u_l, &counter, FlopBucket::low);
  const bool lyap = p.kind == EquationKind::lyapunov;

  SolveReport rep;
  auto fail = [&](FailureKind kind, std::string stage, std::string msg) {
    rep.X = nan_matrix(p.m(), p.n());
    rep.failure = Failure{kind, std::move(stage), std::move(msg)};
    rep.flops = {counter.low.load(), counter.high.load()};
    return rep;
  };

  const RoundedMatrix Ah = round_matrix(p.A, cfg.u_h);
  const RoundedMatrix Bh = round_matrix(p.B, cfg.u_h);
  const RoundedMatrix Ch = round_matrix(p.C, cfg.u_h);
  if (Ah.overflow || Bh.overflow || Ch.overflow) {
    return fail(FailureKind::overflow, "round_high", "input overflows u_h");
  }
  const RoundedMatrix Al = round_matrix(Ah.matrix, cfg.u_l);
  const RoundedMatrix Bl = round_matrix(Bh.matrix, cfg.u_l);
  if (Al.overflow || Bl.overflow) {
    return fail(FailureKind::overflow, "round_low", "coefficient overflows u_l");
  }

  SchurFactors sfA, sfB;
  try {
    sfA = schur(Al.matrix, ctx_l);
    sfB = lyap ? lyapunov_partner(sfA) : schur(Bl.matrix, ctx_l);
  } catch (const Error& e) {
    return fail(FailureKind::schur_failure, "schur", e.what());
  }

  std::unique_ptr<Transforms> tr;
  if (inversion)
    tr = std::make_unique<InvTransforms>(ctx_h);
  else
    tr = std::make_unique<OrthTransforms>(ctx_h);
  try {
    tr->prepare(Ah.matrix, Bh.matrix, Ch.matrix, sfA, sfB, lyap);
  } catch (const RankDeficientError& e) {
    return fail(FailureKind::rank_deficient, "qr", e.what());
  } catch (const SingularMatrixError& e) {
    return fail(FailureKind::singular_factor, "lu", e.what());
  }

  Matrix Y0(p.m(), p.n());
  if (!cfg.y0_zero) {
    const RoundedMatrix Fl = round_matrix(tr->F, cfg.u_l);
    if (Fl.overflow) return fail(FailureKind::overflow, "initial_solve", "F overflows u_l");
    try {
      Y0 = solve_sylv_tri(sfA.T, sfB.T, Fl.matrix, ctx_l);
    } catch (const SingularEquationError& e) {
      // An exactly zero pivot divides to Inf/NaN in IEEE arithmetic; the
      // report mirrors that with a NaN matrix.
      return fail(FailureKind::numeric_breakdown, "initial_solve", e.what());
    } catch (const NumericBreakdownError& e) {
      return fail(FailureKind::numeric_breakdown, "initial_solve", e.what());
    }
  }

  SolveReport inner = solve_pert_sylv_tri_stat(sfA.T, tr->LA, sfB.T, tr->LB, tr->F, Y0, cfg, ctx_h);
  rep.iterations = inner.iterations;
  rep.correction_norms = std::move(inner.correction_norms);
  rep.converged = inner.converged;
  rep.failure = std::move(inner.failure);
  rep.iterates = std::move(inner.iterates);
  rep.X = inner.X.all_finite() ? tr->recover(inner.X) : nan_matrix(p.m(), p.n());
  rep.residual = residual(p, rep.X);
  rep.flops = {counter.low.load(), counter.high.load()};
  return rep;
}

}  // namespace

SolveReport mp_orth(const SylvesterProblem& p, const RefinementConfig& cfg) {
  return mixed_precision_solve(p, cfg, false);
}

SolveReport mp_inv(const SylvesterProblem& p, const RefinementConfig& cfg) {
  return mixed_precision_solve(p, cfg, true);
}

namespace {

double regime_threshold(const FpFormat& u_l) {
  if (u_l == formats::bfloat16) return 1e3;
  if (u_l == formats::binary16 || u_l == formats::tf32) return 1e4;
  if (u_l == formats::binary32) return 1e8;
  // Interpolates the table above: 10^ceil(t/3).
  return std::pow(10.0, std::ceil(u_l.significand_bits() / 3.0));
}

}  // namespace

ConvergenceRegime check_convergence_regime(const FpFormat& u_l, const FpFormat& u_h,
                                           double kappa_inf) {
  ConvergenceRegime r;
  r.kappa_threshold = regime_threshold(u_l);
  r.expected_backward = u_h.unit_roundoff();
  r.expected_forward_factor = u_h.unit_roundoff();
  r.in_regime = kappa_inf <= r.kappa_threshold;
  return r;
}

}  // namespace mpsylv
