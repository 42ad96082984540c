#include "mpsylv/generator.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "mpsylv/errors.hpp"
#include "mpsylv/linalg.hpp"

namespace mpsylv {

std::uint64_t CounterRng::next_u64() {
  ++counter_;
  std::uint64_t z = seed_ + counter_ * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double CounterRng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double CounterRng::normal() {
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::string to_string(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::random_dense:
      return "random-dense";
    case GeneratorKind::logspace_conditioned:
      return "logspace-conditioned";
    case GeneratorKind::hermitian:
      return "hermitian";
    case GeneratorKind::lyapunov:
      return "lyapunov";
  }
  return "unknown";
}

GeneratorKind parse_generator_kind(std::string_view text) {
  if (text == "random-dense") return GeneratorKind::random_dense;
  if (text == "logspace-conditioned" || text == "logspace") return GeneratorKind::logspace_conditioned;
  if (text == "hermitian") return GeneratorKind::hermitian;
  if (text == "lyapunov") return GeneratorKind::lyapunov;
  throw std::invalid_argument("unknown generator kind: " + std::string(text));
}

std::string to_string(Similarity s) {
  return s == Similarity::listing ? "listing" : "orthonormal";
}

Similarity parse_similarity(std::string_view text) {
  if (text == "listing") return Similarity::listing;
  if (text == "orthonormal") return Similarity::orthonormal;
  throw std::invalid_argument("unknown similarity: " + std::string(text));
}

std::vector<double> logspace(double t, std::size_t k) {
  std::vector<double> v(k);
  for (std::size_t i = 0; i < k; ++i) {
    const double e = k == 1 ? t : t * static_cast<double>(i) / static_cast<double>(k - 1);
    v[i] = std::pow(10.0, e);
  }
  return v;
}

namespace {

// Column-major fill, matching the order in which MATLAB draws entries.
Matrix real_matrix(CounterRng& rng, std::size_t r, std::size_t c, bool normal) {
  Matrix M(r, c);
  for (std::size_t j = 0; j < c; ++j)
    for (std::size_t i = 0; i < r; ++i) M(i, j) = normal ? rng.normal() : rng.uniform();
  return M;
}

Matrix complex_normal(CounterRng& rng, std::size_t r, std::size_t c) {
  Matrix M(r, c);
  for (std::size_t j = 0; j < c; ++j)
    for (std::size_t i = 0; i < r; ++i) {
      const double re = rng.normal();
      M(i, j) = Complex(re, rng.normal());
    }
  return M;
}

Matrix diag_of(const std::vector<double>& d) {
  Matrix D(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) D(i, i) = d[i];
  return D;
}

// P D P^-1 in binary64.
Matrix similarity(Matrix P, const std::vector<double>& d, Similarity mode) {
  const PrecisionContext ctx(formats::binary64);
  if (mode == Similarity::orthonormal) P = householder_qr(P, ctx).Q;
  const LuFactors F = lu(P, ctx);
  return lu_solve(F, P * diag_of(d), Side::right, Op::none, ctx);
}

Matrix hermitian_with_spectrum(CounterRng& rng, const std::vector<double>& d) {
  const PrecisionContext ctx(formats::binary64);
  const Matrix Q = householder_qr(complex_normal(rng, d.size(), d.size()), ctx).Q;
  Matrix H = Q * diag_of(d) * Q.adjoint();
  // exact Hermitian symmetry
  for (std::size_t j = 0; j < H.cols(); ++j) {
    H(j, j) = H(j, j).real();
    for (std::size_t i = j + 1; i < H.rows(); ++i) H(j, i) = std::conj(H(i, j));
  }
  return H;
}

}  // namespace

SylvesterProblem generate(const ProblemGenerator& g) {
  if (g.m == 0 || g.n == 0) throw DimensionError("generate: m and n must be positive");
  if (!(g.t >= 0.0)) throw std::invalid_argument("generate: t must be non-negative");
  CounterRng rng(g.seed);
  switch (g.kind) {
    case GeneratorKind::random_dense: {
      Matrix A = real_matrix(rng, g.m, g.m, true);
      Matrix B = real_matrix(rng, g.n, g.n, true);
      Matrix C = real_matrix(rng, g.m, g.n, true);
      return SylvesterProblem::general(std::move(A), std::move(B), std::move(C));
    }
    case GeneratorKind::logspace_conditioned: {
      Matrix A = similarity(real_matrix(rng, g.m, g.m, true), logspace(g.t, g.m), g.similarity);
      Matrix B = similarity(real_matrix(rng, g.n, g.n, false), logspace(g.t, g.n), g.similarity);
      Matrix C = real_matrix(rng, g.m, g.n, true);
      return SylvesterProblem::general(std::move(A), std::move(B), std::move(C));
    }
    case GeneratorKind::hermitian: {
      Matrix A = hermitian_with_spectrum(rng, logspace(g.t, g.m));
      Matrix B = hermitian_with_spectrum(rng, logspace(g.t, g.n));
      Matrix C = complex_normal(rng, g.m, g.n);
      return SylvesterProblem::hermitian(std::move(A), std::move(B), std::move(C));
    }
    case GeneratorKind::lyapunov: {
      if (g.m != g.n) throw DimensionError("generate: Lyapunov problems need m == n");
      Matrix A = similarity(real_matrix(rng, g.m, g.m, true), logspace(g.t, g.m), g.similarity);
      Matrix C = real_matrix(rng, g.m, g.m, true);
      return SylvesterProblem::lyapunov(std::move(A), std::move(C));
    }
  }
  throw std::invalid_argument("generate: unknown kind");
}

}  // namespace mpsylv
