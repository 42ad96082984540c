#include <algorithm>
#include <cmath>

#include "mpsylv/errors.hpp"
#include "mpsylv/linalg.hpp"

namespace mpsylv {

namespace {

void check_rank(const Matrix& A, const Matrix& R, const PrecisionContext& ctx) {
  const double tol = static_cast<double>(A.cols()) * ctx.unit_roundoff() *
                     norm(A, NormKind::frobenius);
  for (std::size_t k = 0; k < R.cols(); ++k) {
    if (!(R(k, k).real() > tol)) {
      throw RankDeficientError("QR: column " + std::to_string(k) +
                               " is numerically dependent on the previous ones");
    }
  }
}

}  // namespace

QrFactors householder_qr(const Matrix& A, const PrecisionContext& ctx) {
  const std::size_t m = A.rows();
  const std::size_t n = A.cols();
  if (m < n) throw DimensionError("householder_qr: more columns than rows");

  Matrix R = A;
  std::vector<std::vector<Complex>> reflectors;  // unit vectors, H = I - 2 v v^*
  reflectors.reserve(n);
  std::uint64_t flops = 0;

  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t len = m - k;
    std::vector<Complex> v(len);
    double xnorm = 0.0;
    for (std::size_t i = 0; i < len; ++i) {
      v[i] = R(k + i, k);
      xnorm = ctx.hypot(xnorm, ctx.abs(v[i]));
    }
    if (xnorm == 0.0) {
      reflectors.emplace_back();  // no reflection; rank check reports it
      continue;
    }
    const double a0 = ctx.abs(v[0]);
    const Complex phase = a0 == 0.0 ? Complex{1.0, 0.0} : ctx.div(v[0], a0);
    const Complex alpha = ctx.mul(-xnorm, phase);
    v[0] = ctx.sub(v[0], alpha);
    double vnorm = 0.0;
    for (const auto& z : v) vnorm = ctx.hypot(vnorm, ctx.abs(z));
    for (auto& z : v) z = ctx.div(z, vnorm);

    for (std::size_t j = k; j < n; ++j) {
      Complex s{};
      for (std::size_t i = 0; i < len; ++i) s = ctx.add(s, ctx.mul(std::conj(v[i]), R(k + i, j)));
      const Complex s2 = ctx.mul(2.0, s);
      for (std::size_t i = 0; i < len; ++i) R(k + i, j) = ctx.sub(R(k + i, j), ctx.mul(s2, v[i]));
    }
    flops += 4ULL * len * (n - k);
    R(k, k) = alpha;
    for (std::size_t i = k + 1; i < m; ++i) R(i, k) = Complex{};
    reflectors.push_back(std::move(v));
  }

  // Q = H_0 H_1 ... H_{n-1} applied to the first n columns of I
  Matrix Q(m, n);
  for (std::size_t j = 0; j < n; ++j) Q(j, j) = 1.0;
  for (std::size_t kk = n; kk-- > 0;) {
    const auto& v = reflectors[kk];
    if (v.empty()) continue;
    const std::size_t len = v.size();
    for (std::size_t j = 0; j < n; ++j) {
      Complex s{};
      for (std::size_t i = 0; i < len; ++i) s = ctx.add(s, ctx.mul(std::conj(v[i]), Q(kk + i, j)));
      const Complex s2 = ctx.mul(2.0, s);
      for (std::size_t i = 0; i < len; ++i)
        Q(kk + i, j) = ctx.sub(Q(kk + i, j), ctx.mul(s2, v[i]));
    }
    flops += 4ULL * len * n;
  }

  // positive diagonal: R <- D^* R, Q <- Q D with D = diag(phase(r_kk))
  Matrix Rtop(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i <= j; ++i) Rtop(i, j) = R(i, j);
  for (std::size_t k = 0; k < n; ++k) {
    const double mag = ctx.abs(Rtop(k, k));
    if (mag == 0.0) continue;
    const Complex phase = ctx.div(Rtop(k, k), mag);
    for (std::size_t j = k + 1; j < n; ++j) Rtop(k, j) = ctx.mul(std::conj(phase), Rtop(k, j));
    Rtop(k, k) = mag;
    for (std::size_t i = 0; i < m; ++i) Q(i, k) = ctx.mul(Q(i, k), phase);
  }
  ctx.count(flops);
  check_rank(A, Rtop, ctx);
  return {std::move(Q), std::move(Rtop)};
}

QrFactors mgs_qr(const Matrix& A, const PrecisionContext& ctx) {
  const std::size_t m = A.rows();
  const std::size_t n = A.cols();
  if (m < n) throw DimensionError("mgs_qr: more columns than rows");

  Matrix Q = A;
  Matrix R(n, n);
  std::uint64_t flops = 0;
  for (std::size_t j = 0; j < n; ++j) {
    auto v = Q.col(j);
    for (std::size_t i = 0; i < j; ++i) {
      const auto q = Q.col(i);
      Complex r{};
      for (std::size_t k = 0; k < m; ++k) r = ctx.add(r, ctx.mul(std::conj(q[k]), v[k]));
      for (std::size_t k = 0; k < m; ++k) v[k] = ctx.sub(v[k], ctx.mul(r, q[k]));
      R(i, j) = r;
    }
    flops += 4ULL * m * j;
    double nrm = 0.0;
    for (std::size_t k = 0; k < m; ++k) nrm = ctx.hypot(nrm, ctx.abs(v[k]));
    R(j, j) = nrm;
    if (nrm > 0.0)
      for (std::size_t k = 0; k < m; ++k) v[k] = ctx.div(v[k], nrm);
    flops += 2ULL * m;
  }
  ctx.count(flops);
  check_rank(A, R, ctx);
  return {std::move(Q), std::move(R)};
}

LuFactors lu(const Matrix& A, const PrecisionContext& ctx) {
  if (!A.is_square()) throw DimensionError("lu: matrix is not square");
  const std::size_t n = A.rows();
  Matrix LU = A;
  std::vector<std::size_t> pivot(n);
  for (std::size_t k = 0; k < n; ++k) pivot[k] = k;

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    double best = std::abs(LU(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      const double a = std::abs(LU(i, k));
      if (a > best) {
        best = a;
        p = i;
      }
    }
    if (best == 0.0) {
      throw SingularMatrixError("lu: exactly zero pivot in column " + std::to_string(k));
    }
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(LU(k, j), LU(p, j));
      std::swap(pivot[k], pivot[p]);
    }
    const Complex piv = LU(k, k);
    for (std::size_t i = k + 1; i < n; ++i) LU(i, k) = ctx.div(LU(i, k), piv);
    for (std::size_t j = k + 1; j < n; ++j) {
      const Complex ukj = LU(k, j);
      for (std::size_t i = k + 1; i < n; ++i) LU(i, j) = ctx.sub(LU(i, j), ctx.mul(LU(i, k), ukj));
    }
  }
  ctx.count(2ULL * n * n * n / 3);
  return {std::move(LU), std::move(pivot), ctx};
}

namespace {

// op(A) X = B with A = P^T L U.
Matrix lu_solve_left(const LuFactors& F, const Matrix& B, Op op, const PrecisionContext& ctx) {
  const Matrix& LU = F.LU;
  const std::size_t n = LU.rows();
  if (B.rows() != n) throw DimensionError("lu_solve: right-hand side has the wrong height");
  const std::size_t nrhs = B.cols();
  Matrix X(n, nrhs);

  if (op == Op::none) {
    // L U X = P B
    for (std::size_t c = 0; c < nrhs; ++c) {
      auto x = X.col(c);
      for (std::size_t k = 0; k < n; ++k) x[k] = B(F.pivot[k], c);
      for (std::size_t k = 0; k < n; ++k)  // unit lower
        for (std::size_t i = k + 1; i < n; ++i) x[i] = ctx.sub(x[i], ctx.mul(LU(i, k), x[k]));
      for (std::size_t k = n; k-- > 0;) {  // upper
        x[k] = ctx.div(x[k], LU(k, k));
        for (std::size_t i = 0; i < k; ++i) x[i] = ctx.sub(x[i], ctx.mul(LU(i, k), x[k]));
      }
    }
  } else {
    // A^* = U^* L^* P, so X = P^T L^-* U^-* B
    for (std::size_t c = 0; c < nrhs; ++c) {
      std::vector<Complex> w(B.col(c).begin(), B.col(c).end());
      for (std::size_t k = 0; k < n; ++k) {  // U^* is lower triangular
        Complex s = w[k];
        for (std::size_t i = 0; i < k; ++i) s = ctx.sub(s, ctx.mul(std::conj(LU(i, k)), w[i]));
        w[k] = ctx.div(s, std::conj(LU(k, k)));
      }
      for (std::size_t k = n; k-- > 0;) {  // L^* is unit upper triangular
        Complex s = w[k];
        for (std::size_t i = k + 1; i < n; ++i) s = ctx.sub(s, ctx.mul(std::conj(LU(i, k)), w[i]));
        w[k] = s;
      }
      auto x = X.col(c);
      for (std::size_t k = 0; k < n; ++k) x[F.pivot[k]] = w[k];
    }
  }
  ctx.count(2ULL * n * n * nrhs);
  return X;
}

}  // namespace

Matrix lu_solve(const LuFactors& F, const Matrix& B, Side side, Op op,
                const PrecisionContext& ctx) {
  if (side == Side::left) return lu_solve_left(F, B, op, ctx);
  // X op(A) = B  <=>  op(A)^* X^* = B^*
  const Op flipped = op == Op::none ? Op::conj_transpose : Op::none;
  return lu_solve_left(F, B.adjoint(), flipped, ctx).adjoint();
}

}  // namespace mpsylv
