// Node-local kernels: OpenMP versions against the serial references, and
// one full simulated product for the driver overhead.

#include <random>

#include <benchmark/benchmark.h>

#include "ccq/dmatrix.hpp"
#include "ccq/kernels.hpp"
#include "ccq/mm.hpp"

namespace {

using namespace ccq;

constexpr Word kP = 1000003;

FieldMatrix random_field(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 g(seed);
  FieldMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = g() % kP;
  return m;
}

Matrix<Word> random_minplus(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 g(seed);
  Matrix<Word> m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = g() % 5 == 0 ? kInfWord : mp_encode(static_cast<std::int64_t>(g() % 201) - 100);
  return m;
}

void BM_matmul_mod(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const PrimeField f(kP);
  const auto a = random_field(n, 1), b = random_field(n, 2);
  for (auto _ : st) benchmark::DoNotOptimize(matmul_mod(f, a, b));
  st.SetComplexityN(st.range(0));
}

void BM_matmul_mod_serial(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const PrimeField f(kP);
  const auto a = random_field(n, 1), b = random_field(n, 2);
  for (auto _ : st) benchmark::DoNotOptimize(serial::matmul_mod(f, a, b));
  st.SetComplexityN(st.range(0));
}

void BM_minplus(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const auto a = random_minplus(n, 1), b = random_minplus(n, 2);
  for (auto _ : st) benchmark::DoNotOptimize(minplus(a, b));
}

void BM_minplus_serial(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const auto a = random_minplus(n, 1), b = random_minplus(n, 2);
  for (auto _ : st) benchmark::DoNotOptimize(serial::minplus(a, b));
}

void BM_simulated_mm(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const auto a = random_field(n, 1), b = random_field(n, 2);
  for (auto _ : st) {
    CliqueWorld w(n, PrimeField(kP), 1);
    w.set_parallel_local(st.range(1) != 0);
    benchmark::DoNotOptimize(mm(w, scatter(w, "A", a, Layout::rows), scatter(w, "B", b, Layout::cols), "C"));
  }
}

}  // namespace

BENCHMARK(BM_matmul_mod)->RangeMultiplier(2)->Range(64, 512)->Complexity(benchmark::oNCubed);
BENCHMARK(BM_matmul_mod_serial)->RangeMultiplier(2)->Range(64, 512)->Complexity(benchmark::oNCubed);
BENCHMARK(BM_minplus)->RangeMultiplier(2)->Range(64, 512);
BENCHMARK(BM_minplus_serial)->RangeMultiplier(2)->Range(64, 512);
BENCHMARK(BM_simulated_mm)->ArgsProduct({{64, 128, 256}, {0, 1}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
