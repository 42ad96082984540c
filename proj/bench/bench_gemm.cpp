// OpenMP gemm against the serial reference, in binary64 (no rounding) and in
// simulated binary16 (rounding on every operation).

#include <benchmark/benchmark.h>

#include "mpsylv/generator.hpp"
#include "mpsylv/linalg.hpp"

namespace {

using namespace mpsylv;

Matrix random_matrix(std::size_t n, std::uint64_t seed) {
  CounterRng rng(seed);
  Matrix M(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) M(i, j) = Complex(rng.normal(), rng.normal());
  return M;
}

void BM_gemm(benchmark::State& state, bool parallel, FpFormat fmt) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Matrix A = random_matrix(n, 1);
  const Matrix B = random_matrix(n, 2);
  const PrecisionContext ctx(fmt);
  for (auto _ : state) {
    Matrix C = parallel ? gemm(Complex(1.0), A, B, Complex(0.0), Matrix{}, ctx)
                        : gemm_reference(Complex(1.0), A, B, Complex(0.0), Matrix{}, ctx);
    benchmark::DoNotOptimize(C.data());
  }
  state.counters["flops"] = benchmark::Counter(2.0 * n * n * n * state.iterations(),
                                               benchmark::Counter::kIsRate);
}

}  // namespace

BENCHMARK_CAPTURE(BM_gemm, serial_binary64, false, formats::binary64)->RangeMultiplier(2)->Range(32, 256);
BENCHMARK_CAPTURE(BM_gemm, openmp_binary64, true, formats::binary64)->RangeMultiplier(2)->Range(32, 256);
BENCHMARK_CAPTURE(BM_gemm, serial_binary16, false, formats::binary16)->RangeMultiplier(2)->Range(32, 128);
BENCHMARK_CAPTURE(BM_gemm, openmp_binary16, true, formats::binary16)->RangeMultiplier(2)->Range(32, 128);

BENCHMARK_MAIN();
