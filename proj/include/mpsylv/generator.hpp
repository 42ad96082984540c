#pragma once

// Deterministic test-problem generation.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "mpsylv/sylvester.hpp"

namespace mpsylv {

/// Counter-based generator: draw k of stream `seed` is splitmix64's output
/// function applied to seed + (k + 1) * 0x9E3779B97F4A7C15.  Normals use the
/// cosine branch of Box-Muller on two consecutive uniforms.
class CounterRng {
 public:
  static constexpr std::string_view kAlgorithm = "splitmix64-counter/box-muller-cos/v1";

  explicit CounterRng(std::uint64_t seed, std::uint64_t counter = 0)
      : seed_(seed), counter_(counter) {}

  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double normal();

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_;
};

enum class GeneratorKind { random_dense, logspace_conditioned, hermitian, lyapunov };

std::string to_string(GeneratorKind kind);
GeneratorKind parse_generator_kind(std::string_view text);

/// How the random similarity P of A = P D P^-1 is used.  `listing` takes the
/// raw draw (standard normal for A, uniform for B); its kappa_2(M_f) is
/// typically 10^(t+2) for m = n = 10.  `orthonormal` replaces the draw by its
/// Householder Q factor, which gives kappa_2(M_f) = 10^t.
enum class Similarity { orthonormal, listing };

std::string to_string(Similarity s);
Similarity parse_similarity(std::string_view text);

struct ProblemGenerator {
  GeneratorKind kind = GeneratorKind::logspace_conditioned;
  std::size_t m = 10;
  std::size_t n = 10;
  double t = 0.0;
  std::uint64_t seed = 1;
  Similarity similarity = Similarity::orthonormal;
};

/// random-dense: real standard-normal A, B, C.
/// logspace-conditioned: A = P diag(10^linspace(0,t,m)) P^-1 with P drawn
///   standard normal, B likewise with P drawn uniform on [0,1) and n points,
///   C standard normal.
/// hermitian: A = Q diag(10^linspace(0,t,m)) Q^* with Q the unitary factor of
///   a complex normal matrix, B likewise, C complex normal.
/// lyapunov: A as for logspace-conditioned, B = A^*, m = n required.
SylvesterProblem generate(const ProblemGenerator& g);

/// 10^linspace(0, t, k), the k-point logarithmic grid of MATLAB's logspace.
std::vector<double> logspace(double t, std::size_t k);

}  // namespace mpsylv
