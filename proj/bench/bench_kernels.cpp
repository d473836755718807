// OpenMP kernels against their serial references on the same inputs.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "catamp/kernels.hpp"
#include "catamp/linear_optics.hpp"
#include "catamp/reference.hpp"

using namespace catamp;

namespace {

std::vector<cplx> random_buffer(std::size_t n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> g;
  std::vector<cplx> v(n);
  for (auto& x : v) x = {g(rng), g(rng)};
  return v;
}

// Three modes of dimension d, the shape the teleamplifier resource reaches.
ModeShape pure_shape(int d) { return ModeShape({d, d, d}); }
// Density matrix over two modes, viewed as a four-mode tensor.
ModeShape mixed_shape(int d) { return ModeShape({d, d, d, d}); }

const kernels::Mat2 kSplitter = beam_splitter_matrix(0.3);

template <bool Reference>
void BM_TwoModeUnitary(benchmark::State& st) {
  const auto shape = pure_shape(static_cast<int>(st.range(0)));
  const auto in = random_buffer(shape.size(), 1);
  std::vector<cplx> out(shape.size());
  for (auto _ : st) {
    if constexpr (Reference)
      reference::two_mode_unitary(shape, in, out, 0, 1, kSplitter);
    else
      kernels::two_mode_unitary(shape, in, out, 0, 1, kSplitter);
    benchmark::DoNotOptimize(out.data());
  }
  st.SetItemsProcessed(st.iterations() * static_cast<long>(shape.size()));
}

template <bool Reference>
void BM_PureLoss(benchmark::State& st) {
  const auto shape = mixed_shape(static_cast<int>(st.range(0)));
  const auto rho = random_buffer(shape.size(), 2);
  std::vector<cplx> out(shape.size());
  for (auto _ : st) {
    if constexpr (Reference)
      reference::pure_loss(ModeShape({shape.dim(0), shape.dim(1)}), rho, out, 1, 0.4);
    else
      kernels::pure_loss(ModeShape({shape.dim(0), shape.dim(1)}), rho, out, 1, 0.4);
    benchmark::DoNotOptimize(out.data());
  }
  st.SetItemsProcessed(st.iterations() * static_cast<long>(shape.size()));
}

template <bool Reference>
void BM_PartialTrace(benchmark::State& st) {
  const int d = static_cast<int>(st.range(0));
  const ModeShape modes({d, d});
  const auto rho = random_buffer(modes.size() * modes.size(), 3);
  std::vector<cplx> out(d * d);
  const std::vector<int> keep{0};
  for (auto _ : st) {
    if constexpr (Reference)
      reference::partial_trace(modes, rho, keep, out);
    else
      kernels::partial_trace(modes, rho, keep, out);
    benchmark::DoNotOptimize(out.data());
  }
}

template <bool Reference>
void BM_PhaseShift(benchmark::State& st) {
  const auto shape = pure_shape(static_cast<int>(st.range(0)));
  auto data = random_buffer(shape.size(), 4);
  for (auto _ : st) {
    if constexpr (Reference)
      reference::phase_shift(shape, data, 2, 0.1);
    else
      kernels::phase_shift(shape, data, 2, 0.1);
    benchmark::DoNotOptimize(data.data());
  }
}

}  // namespace

BENCHMARK(BM_TwoModeUnitary<false>)->Name("two_mode_unitary/omp")->Arg(12)->Arg(24);
BENCHMARK(BM_TwoModeUnitary<true>)->Name("two_mode_unitary/reference")->Arg(12)->Arg(24);
BENCHMARK(BM_PureLoss<false>)->Name("pure_loss/omp")->Arg(12)->Arg(20);
BENCHMARK(BM_PureLoss<true>)->Name("pure_loss/reference")->Arg(12)->Arg(20);
BENCHMARK(BM_PartialTrace<false>)->Name("partial_trace/omp")->Arg(16)->Arg(32);
BENCHMARK(BM_PartialTrace<true>)->Name("partial_trace/reference")->Arg(16)->Arg(32);
BENCHMARK(BM_PhaseShift<false>)->Name("phase_shift/omp")->Arg(32)->Arg(64);
BENCHMARK(BM_PhaseShift<true>)->Name("phase_shift/reference")->Arg(32)->Arg(64);

BENCHMARK_MAIN();
