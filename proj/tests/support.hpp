#pragma once

// Independent oracles shared by the test suites.  Nothing here calls the
// library's own solvers or rounding routines.

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstring>
#include <limits>
#include <stdexcept>
#include <vector>

#include "mpsylv/generator.hpp"
#include "mpsylv/matrix.hpp"

namespace oracle {

using mpsylv::Complex;
using mpsylv::Matrix;
using LComplex = std::complex<long double>;

// Round-to-nearest-even of a double into a format with t significand bits and
// exponent range [emin, emax], computed on the integer bit pattern.
inline double round_bits(double x, int t, int emin, int emax) {
  if (std::isnan(x) || std::isinf(x) || x == 0.0) return x;
  const auto bits = std::bit_cast<std::uint64_t>(x);
  const bool neg = (bits >> 63) != 0;
  const int biased = static_cast<int>((bits >> 52) & 0x7FF);
  std::uint64_t mant = bits & ((1ULL << 52) - 1);
  int e;  // x = mant * 2^(e - 52)
  if (biased == 0) {
    e = -1022;
  } else {
    mant |= 1ULL << 52;
    e = biased - 1023;
  }
  // exponent of the leading bit of x
  int lead = e;
  if (biased == 0) lead = e - (52 - (63 - std::countl_zero(mant)));
  const int q = std::max(lead, emin) - (t - 1);  // quantum exponent
  const int shift = q - (e - 52);
  std::uint64_t r;
  if (shift <= 0) {
    r = mant;  // exact; value = mant * 2^(e-52)
    const double v = std::ldexp(static_cast<double>(r), e - 52);
    return neg ? -v : v;
  }
  if (shift >= 64) {
    r = 0;
  } else {
    r = mant >> shift;
    const std::uint64_t rem = mant & ((1ULL << shift) - 1);
    const std::uint64_t half = 1ULL << (shift - 1);
    if (rem > half || (rem == half && (r & 1ULL) != 0)) ++r;
  }
  double v = std::ldexp(static_cast<double>(r), q);
  const double maxf = std::ldexp(2.0 - std::ldexp(1.0, 1 - t), emax);
  if (v > maxf) v = std::numeric_limits<double>::infinity();
  return neg ? -v : v;
}

inline double round_binary16(double x) { return round_bits(x, 11, -14, 15); }

// M_f = I_n (x) A + B^T (x) I_m in long double, straight from the definition.
inline std::vector<LComplex> kron_operator(const Matrix& A, const Matrix& B) {
  const std::size_t m = A.rows(), n = B.rows(), N = m * n;
  std::vector<LComplex> M(N * N);  // row-major
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t row = j * m + i;
      for (std::size_t k = 0; k < m; ++k) M[row * N + j * m + k] += LComplex(A(i, k));
      for (std::size_t l = 0; l < n; ++l) M[row * N + l * m + i] += LComplex(B(l, j));
    }
  return M;
}

// Gaussian elimination with partial pivoting in long double.
inline std::vector<LComplex> gauss_solve(std::vector<LComplex> M, std::vector<LComplex> b) {
  const std::size_t N = b.size();
  for (std::size_t k = 0; k < N; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < N; ++i)
      if (std::abs(M[i * N + k]) > std::abs(M[p * N + k])) p = i;
    if (M[p * N + k] == LComplex{}) throw std::runtime_error("oracle: singular system");
    if (p != k) {
      for (std::size_t j = 0; j < N; ++j) std::swap(M[k * N + j], M[p * N + j]);
      std::swap(b[k], b[p]);
    }
    for (std::size_t i = k + 1; i < N; ++i) {
      const LComplex f = M[i * N + k] / M[k * N + k];
      if (f == LComplex{}) continue;
      for (std::size_t j = k; j < N; ++j) M[i * N + j] -= f * M[k * N + j];
      b[i] -= f * b[k];
    }
  }
  for (std::size_t k = N; k-- > 0;) {
    LComplex s = b[k];
    for (std::size_t j = k + 1; j < N; ++j) s -= M[k * N + j] * b[j];
    b[k] = s / M[k * N + k];
  }
  return b;
}

// X with vec(X) = M_f^{-1} vec(C).
inline Matrix kron_solve(const Matrix& A, const Matrix& B, const Matrix& C) {
  std::vector<LComplex> b(C.size());
  for (std::size_t k = 0; k < C.size(); ++k) b[k] = LComplex(C.data()[k]);
  const auto x = gauss_solve(kron_operator(A, B), b);
  Matrix X(C.rows(), C.cols());
  for (std::size_t k = 0; k < x.size(); ++k)
    X.data()[k] = Complex(static_cast<double>(x[k].real()), static_cast<double>(x[k].imag()));
  return X;
}

// Product in long double, rounded once to double per entry.
inline Matrix product(const Matrix& A, const Matrix& B) {
  Matrix P(A.rows(), B.cols());
  for (std::size_t j = 0; j < B.cols(); ++j)
    for (std::size_t i = 0; i < A.rows(); ++i) {
      LComplex s{};
      for (std::size_t k = 0; k < A.cols(); ++k) s += LComplex(A(i, k)) * LComplex(B(k, j));
      P(i, j) = Complex(static_cast<double>(s.real()), static_cast<double>(s.imag()));
    }
  return P;
}

inline double fro(const Matrix& M) {
  long double s = 0;
  for (std::size_t k = 0; k < M.size(); ++k) s += std::norm(LComplex(M.data()[k]));
  return static_cast<double>(std::sqrt(s));
}

inline double rel_diff(const Matrix& X, const Matrix& Y) {
  long double num = 0;
  for (std::size_t k = 0; k < X.size(); ++k)
    num += std::norm(LComplex(X.data()[k]) - LComplex(Y.data()[k]));
  const double den = fro(Y);
  return static_cast<double>(std::sqrt(num)) / (den == 0.0 ? 1.0 : den);
}

inline Matrix randn(mpsylv::CounterRng& rng, std::size_t r, std::size_t c, bool complex = false) {
  Matrix M(r, c);
  for (std::size_t k = 0; k < M.size(); ++k) {
    const double re = rng.normal();
    M.data()[k] = complex ? Complex(re, rng.normal()) : Complex(re);
  }
  return M;
}

// Random matrix with spectrum clustered around `shift`, so that Sylvester
// problems built from two of them are well separated.
inline Matrix shifted_random(mpsylv::CounterRng& rng, std::size_t n, double shift,
                             bool complex = true) {
  Matrix M = randn(rng, n, n, complex);
  const double scale = 0.5 / std::sqrt(static_cast<double>(n));
  for (std::size_t k = 0; k < M.size(); ++k) M.data()[k] *= scale;
  for (std::size_t i = 0; i < n; ++i) M(i, i) += shift;
  return M;
}

inline Matrix upper_random(mpsylv::CounterRng& rng, std::size_t n, double shift) {
  Matrix M = shifted_random(rng, n, shift);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = j + 1; i < n; ++i) M(i, j) = Complex{};
  return M;
}

inline Matrix random_hermitian(mpsylv::CounterRng& rng, std::size_t n, double shift) {
  const Matrix G = shifted_random(rng, n, 0.0);
  Matrix H(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) H(i, j) = 0.5 * (G(i, j) + std::conj(G(j, i)));
  for (std::size_t i = 0; i < n; ++i) H(i, i) = H(i, i).real() + shift;
  return H;
}

}  // namespace oracle
