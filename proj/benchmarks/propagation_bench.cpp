#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "tripletctl/tripletctl.hpp"

namespace {

using namespace tripletctl;

ControlWaveform random_bang_bang(std::size_t segments, double duration) {
  std::mt19937_64 rng(1);
  std::bernoulli_distribution coin;
  std::vector<double> omegas(segments);
  for (auto& w : omegas) w = coin(rng) ? 1.0 : -1.0;
  return ControlWaveform::piecewise_constant(duration, std::vector<double>(segments, -0.11), omegas);
}

void BM_PropagateRk4(benchmark::State& state) {
  const auto w = random_bang_bang(static_cast<std::size_t>(state.range(0)), 2.5);
  for (auto _ : state) benchmark::DoNotOptimize(evolve(w, TripletAmplitudes::ground().vector()));
}
BENCHMARK(BM_PropagateRk4)->Arg(100)->Arg(1000);

void BM_PropagateExponential(benchmark::State& state) {
  const auto w = random_bang_bang(static_cast<std::size_t>(state.range(0)), 2.5);
  const PropagateOptions opt{.method = PropagationMethod::kPiecewiseExponential};
  for (auto _ : state) benchmark::DoNotOptimize(evolve(w, TripletAmplitudes::ground().vector(), opt));
}
BENCHMARK(BM_PropagateExponential)->Arg(100)->Arg(1000);

void BM_ShortcutFidelity(benchmark::State& state) {
  const ShortcutSpec spec{ShortcutKind::kSymmetric, 0.1, 10.0};
  for (auto _ : state) benchmark::DoNotOptimize(shortcut_fidelity(spec));
}
BENCHMARK(BM_ShortcutFidelity);

void BM_SegmentExponential(benchmark::State& state) {
  const Matrix3 h = hamiltonian_c(-0.11, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(SegmentExponential(h, 0.0025));
}
BENCHMARK(BM_SegmentExponential);

void BM_AdjointGradientPiecewise(benchmark::State& state) {
  ControlProblem p;
  p.segments = static_cast<std::size_t>(state.range(0));
  p.delta_mode = FixedDelta{-0.11};
  const std::vector<double> x(p.parameter_count(), 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(adjoint_gradient(p, x));
}
BENCHMARK(BM_AdjointGradientPiecewise)->Arg(100)->Arg(1000);

void BM_AdjointGradientSeries(benchmark::State& state) {
  ControlProblem p;
  p.omega_form = OmegaForm::kSeries;
  p.harmonics = static_cast<int>(state.range(0));
  p.delta_mode = SeriesDelta{};
  const std::vector<double> x(p.parameter_count(), 0.05);
  for (auto _ : state) benchmark::DoNotOptimize(adjoint_gradient(p, x));
}
BENCHMARK(BM_AdjointGradientSeries)->Arg(3)->Arg(20);

}  // namespace

BENCHMARK_MAIN();
