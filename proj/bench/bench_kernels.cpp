// Serial versus OpenMP encoder kernels on a full-size field (1326 sensors x
// 3040 samples).

#include "wingsense/encode.hpp"
#include "wingsense/kernels.hpp"
#include "wingsense/random.hpp"

#include <benchmark/benchmark.h>

using namespace wingsense;

namespace {

RowMatrix make_field(long rows = 1326, long cols = 3040) {
  Rng rng(7);
  RowMatrix m(rows, cols);
  for (long i = 0; i < m.size(); ++i) m.data()[i] = rng.uniform(-1.0, 1.0);
  return m;
}

const RowMatrix& field() {
  static const RowMatrix f = make_field();
  return f;
}

template <bool Parallel>
void BM_correlate(benchmark::State& state) {
  const auto kernel = sta_kernel(StaParams{});
  RowMatrix out;
  for (auto _ : state) {
    if constexpr (Parallel) kernels::parallel::correlate_rows(field(), kernel, out);
    else kernels::serial::correlate_rows(field(), kernel, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * field().size());
}

template <bool Parallel>
void BM_abs_max(benchmark::State& state) {
  for (auto _ : state) {
    double v = Parallel ? kernels::parallel::abs_max(field()) : kernels::serial::abs_max(field());
    benchmark::DoNotOptimize(v);
  }
  state.SetItemsProcessed(state.iterations() * field().size());
}

template <bool Parallel>
void BM_sigmoid(benchmark::State& state) {
  RowMatrix m = field();
  for (auto _ : state) {
    state.PauseTiming();
    m = field();
    state.ResumeTiming();
    if constexpr (Parallel) kernels::parallel::sigmoid_inplace(m, 1.0, 20.0, 0.2);
    else kernels::serial::sigmoid_inplace(m, 1.0, 20.0, 0.2);
    benchmark::DoNotOptimize(m.data());
  }
  state.SetItemsProcessed(state.iterations() * field().size());
}

void BM_encode_rows(benchmark::State& state) {
  const bool omp = state.range(0) != 0;
  const auto kernel = sta_kernel(StaParams{});
  for (auto _ : state) {
    RowMatrix xi = project_rows(field(), kernel, omp);
    benchmark::DoNotOptimize(xi.data());
  }
}

}  // namespace

BENCHMARK(BM_correlate<false>)->Name("correlate/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_correlate<true>)->Name("correlate/openmp")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_abs_max<false>)->Name("abs_max/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_abs_max<true>)->Name("abs_max/openmp")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_sigmoid<false>)->Name("sigmoid/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_sigmoid<true>)->Name("sigmoid/openmp")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_encode_rows)->Name("project_rows")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
