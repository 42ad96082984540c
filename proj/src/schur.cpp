#include <cmath>

#include "mpsylv/errors.hpp"
#include "mpsylv/linalg.hpp"

namespace mpsylv {

namespace {

// Complex Givens rotation G = [c s; -conj(s) c] with G [a; b] = [r; 0].
struct Givens {
  double c = 1.0;
  Complex s{};
};

Givens make_givens(Complex a, Complex b, const PrecisionContext& ctx) {
  if (b == Complex{}) return {1.0, {}};
  if (a == Complex{}) return {0.0, {1.0, 0.0}};
  const double abs_a = ctx.abs(a);
  const double nu = ctx.hypot(abs_a, ctx.abs(b));
  const double c = ctx.div(abs_a, nu);
  const Complex phase = ctx.div(a, abs_a);
  const Complex s = ctx.div(ctx.mul(phase, std::conj(b)), nu);
  return {c, s};
}

// rows k, k+1 <- G * rows, over columns [j0, j1)
void rotate_rows(Matrix& H, std::size_t k, const Givens& g, std::size_t j0, std::size_t j1,
                 const PrecisionContext& ctx) {
  const Complex sbar = std::conj(g.s);
  for (std::size_t j = j0; j < j1; ++j) {
    const Complex p = H(k, j);
    const Complex q = H(k + 1, j);
    H(k, j) = ctx.add(ctx.mul(g.c, p), ctx.mul(g.s, q));
    H(k + 1, j) = ctx.sub(ctx.mul(g.c, q), ctx.mul(sbar, p));
  }
}

// columns k, k+1 <- columns * G^*, over rows [i0, i1)
void rotate_cols(Matrix& H, std::size_t k, const Givens& g, std::size_t i0, std::size_t i1,
                 const PrecisionContext& ctx) {
  const Complex sbar = std::conj(g.s);
  for (std::size_t i = i0; i < i1; ++i) {
    const Complex p = H(i, k);
    const Complex q = H(i, k + 1);
    H(i, k) = ctx.add(ctx.mul(g.c, p), ctx.mul(sbar, q));
    H(i, k + 1) = ctx.sub(ctx.mul(g.c, q), ctx.mul(g.s, p));
  }
}

// Householder reduction to upper Hessenberg form, accumulating U.
std::uint64_t hessenberg(Matrix& H, Matrix& U, const PrecisionContext& ctx) {
  const std::size_t m = H.rows();
  std::uint64_t flops = 0;
  for (std::size_t k = 0; k + 2 < m; ++k) {
    const std::size_t len = m - k - 1;
    std::vector<Complex> v(len);
    bool below_zero = true;
    for (std::size_t i = 0; i < len; ++i) {
      v[i] = H(k + 1 + i, k);
      if (i > 0 && v[i] != Complex{}) below_zero = false;
    }
    if (below_zero) continue;

    double xnorm = 0.0;
    for (const auto& z : v) xnorm = ctx.hypot(xnorm, ctx.abs(z));
    const double a0 = ctx.abs(v[0]);
    const Complex phase = a0 == 0.0 ? Complex{1.0, 0.0} : ctx.div(v[0], a0);
    const Complex alpha = ctx.mul(-xnorm, phase);
    v[0] = ctx.sub(v[0], alpha);
    double vnorm = 0.0;
    for (const auto& z : v) vnorm = ctx.hypot(vnorm, ctx.abs(z));
    for (auto& z : v) z = ctx.div(z, vnorm);

    // left: rows k+1.., columns k+1..  (column k is set explicitly)
    for (std::size_t j = k + 1; j < m; ++j) {
      Complex s{};
      for (std::size_t i = 0; i < len; ++i)
        s = ctx.add(s, ctx.mul(std::conj(v[i]), H(k + 1 + i, j)));
      const Complex s2 = ctx.mul(2.0, s);
      for (std::size_t i = 0; i < len; ++i)
        H(k + 1 + i, j) = ctx.sub(H(k + 1 + i, j), ctx.mul(s2, v[i]));
    }
    H(k + 1, k) = alpha;
    for (std::size_t i = k + 2; i < m; ++i) H(i, k) = Complex{};

    // right: all rows of H and U, columns k+1..
    for (Matrix* M : {&H, &U}) {
      for (std::size_t i = 0; i < m; ++i) {
        Complex s{};
        for (std::size_t j = 0; j < len; ++j) s = ctx.add(s, ctx.mul((*M)(i, k + 1 + j), v[j]));
        const Complex s2 = ctx.mul(2.0, s);
        for (std::size_t j = 0; j < len; ++j)
          (*M)(i, k + 1 + j) = ctx.sub((*M)(i, k + 1 + j), ctx.mul(s2, std::conj(v[j])));
      }
    }
    flops += 4ULL * len * (m - k - 1) + 8ULL * len * m;
  }
  return flops;
}

// Eigenvalue of [[a, b], [c, d]] closer to d.
Complex wilkinson_shift(Complex a, Complex b, Complex c, Complex d, const PrecisionContext& ctx) {
  const Complex bc = ctx.mul(b, c);
  if (bc == Complex{}) return d;
  const Complex mu = ctx.mul(0.5, ctx.sub(a, d));
  const Complex disc = ctx.round(std::sqrt(ctx.add(ctx.mul(mu, mu), bc)));
  const Complex den_plus = ctx.add(mu, disc);
  const Complex den_minus = ctx.sub(mu, disc);
  const Complex den = std::abs(den_plus) >= std::abs(den_minus) ? den_plus : den_minus;
  if (den == Complex{}) return d;
  return ctx.sub(d, ctx.div(bc, den));
}

}  // namespace

SchurFactors schur(const Matrix& A, const PrecisionContext& ctx) {
  if (!A.is_square()) throw DimensionError("schur: matrix is not square");
  const std::size_t m = A.rows();
  Matrix H(m, m);
  for (std::size_t k = 0; k < A.size(); ++k) H.data()[k] = ctx.round(A.data()[k]);
  Matrix U = Matrix::identity(m);
  if (m == 0) return {U, H, ctx.format()};

  std::uint64_t flops = hessenberg(H, U, ctx);

  const double u = ctx.unit_roundoff();
  const std::size_t sweep_limit = 30 * m;
  std::size_t sweeps = 0;
  std::size_t since_deflation = 0;
  std::size_t hi = m - 1;

  while (hi > 0) {
    // locate the active window [lo, hi]
    std::size_t lo = hi;
    while (lo > 0) {
      const double sub = std::abs(H(lo, lo - 1));
      double tst = std::abs(H(lo - 1, lo - 1)) + std::abs(H(lo, lo));
      if (tst == 0.0) {
        for (std::size_t i = lo - 1; i <= hi; ++i)
          for (std::size_t j = lo - 1; j <= hi; ++j) tst += std::abs(H(i, j));
      }
      if (sub <= u * tst) {
        H(lo, lo - 1) = Complex{};
        break;
      }
      --lo;
    }
    if (lo == hi) {
      --hi;
      since_deflation = 0;
      continue;
    }

    if (sweeps >= sweep_limit) {
      ctx.count(flops);
      throw IterationLimitError("schur: QR iteration did not converge in " +
                                std::to_string(sweep_limit) + " sweeps");
    }
    ++sweeps;
    ++since_deflation;

    Complex shift;
    if (since_deflation % 11 == 0) {
      // exceptional shift to break cycles
      shift = ctx.add(H(hi, hi), ctx.mul(0.75, Complex(std::abs(H(hi, hi - 1)), 0.0)));
    } else {
      shift = wilkinson_shift(H(hi - 1, hi - 1), H(hi - 1, hi), H(hi, hi - 1), H(hi, hi), ctx);
    }

    // implicit single-shift sweep on [lo, hi]
    Complex x = ctx.sub(H(lo, lo), shift);
    Complex y = H(lo + 1, lo);
    for (std::size_t k = lo; k < hi; ++k) {
      const Givens g = make_givens(x, y, ctx);
      const std::size_t j0 = k > lo ? k - 1 : k;
      rotate_rows(H, k, g, j0, m, ctx);
      if (k > lo) H(k + 1, k - 1) = Complex{};
      const std::size_t i1 = std::min(k + 3, hi + 1);
      rotate_cols(H, k, g, 0, i1, ctx);
      rotate_cols(U, k, g, 0, m, ctx);
      flops += 6ULL * ((m - j0) + i1 + m);
      if (k + 1 < hi) {
        x = H(k + 1, k);
        y = H(k + 2, k);
      }
    }
  }
  ctx.count(flops);

  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t i = j + 1; i < m; ++i) H(i, j) = Complex{};
  return {std::move(U), std::move(H), ctx.format()};
}

HermitianEig hermitian_eig(const Matrix& A, const PrecisionContext& ctx) {
  if (!A.is_square()) throw DimensionError("hermitian_eig: matrix is not square");
  const std::size_t n = A.rows();
  const double u = ctx.unit_roundoff();
  const double afro = norm(A, NormKind::frobenius);
  if (norm(A - A.adjoint(), NormKind::frobenius) > 10.0 * u * afro) {
    throw NotHermitianError("hermitian_eig: ||A - A^*||_F exceeds 10 u ||A||_F");
  }

  // work on the Hermitian matrix defined by the upper triangle
  Matrix W(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < j; ++i) {
      W(i, j) = ctx.round(A(i, j));
      W(j, i) = std::conj(W(i, j));
    }
    W(j, j) = ctx.round(A(j, j).real());
  }
  Matrix V = Matrix::identity(n);
  std::uint64_t flops = 0;

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < n; ++i)
        if (i != j) s += std::norm(W(i, j));
    return std::sqrt(s);
  };
  const double tol = static_cast<double>(n) * u * afro;

  int sweep = 0;
  while (off_norm() > tol) {
    if (sweep++ >= 30) {
      ctx.count(flops);
      throw IterationLimitError("hermitian_eig: Jacobi did not converge in 30 sweeps");
    }
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex apq = W(p, q);
        if (apq == Complex{}) continue;
        const double mag = ctx.abs(apq);
        const Complex phase = ctx.div(apq, mag);  // a_pq = |a_pq| e^{i phi}
        const double app = W(p, p).real();
        const double aqq = W(q, q).real();
        const double tau = ctx.div(ctx.sub(aqq, app), ctx.mul(2.0, mag));
        const double t = ctx.div(tau >= 0.0 ? 1.0 : -1.0,
                                 ctx.add(std::fabs(tau), ctx.hypot(1.0, tau)));
        const double c = ctx.div(1.0, ctx.hypot(1.0, t));
        const double s = ctx.mul(t, c);
        // J = [c, s; -s e^{-i phi}, c e^{-i phi}] on (p, q)
        const Complex eneg = std::conj(phase);
        const Complex jpp = c;
        const Complex jpq = s;
        const Complex jqp = ctx.mul(-s, eneg);
        const Complex jqq = ctx.mul(c, eneg);

        for (Matrix* M : {&W, &V}) {
          for (std::size_t i = 0; i < n; ++i) {
            const Complex x = (*M)(i, p);
            const Complex y = (*M)(i, q);
            (*M)(i, p) = ctx.add(ctx.mul(x, jpp), ctx.mul(y, jqp));
            (*M)(i, q) = ctx.add(ctx.mul(x, jpq), ctx.mul(y, jqq));
          }
        }
        for (std::size_t j = 0; j < n; ++j) {
          const Complex x = W(p, j);
          const Complex y = W(q, j);
          W(p, j) = ctx.add(ctx.mul(std::conj(jpp), x), ctx.mul(std::conj(jqp), y));
          W(q, j) = ctx.add(ctx.mul(std::conj(jpq), x), ctx.mul(std::conj(jqq), y));
        }
        W(p, q) = Complex{};
        W(q, p) = Complex{};
        W(p, p) = W(p, p).real();
        W(q, q) = W(q, q).real();
        flops += 18ULL * n;
      }
    }
  }
  ctx.count(flops);

  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = W(i, i).real();
  return {std::move(V), std::move(d)};
}

}  // namespace mpsylv
