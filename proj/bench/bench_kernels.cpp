// Serial reference against the OpenMP path for the sweep kernels.
// Arg 0 is Exec::Serial, arg 1 Exec::Parallel.

#include <benchmark/benchmark.h>

#include <cmath>

#include "zoll/exec.hpp"
#include "zoll/geodesics.hpp"
#include "zoll/transforms.hpp"
#include "zoll/twistor.hpp"

using namespace zoll;

namespace {

const QuadratureConfig cfg;

RadialProfile two_gauss() { return RadialProfile::gaussian_mixture({{1.0, 1.0}, {-0.5, 2.0}}); }

Exec mode(const benchmark::State& st) { return st.range(0) ? Exec::Parallel : Exec::Serial; }

void label(benchmark::State& st) {
  st.SetLabel(st.range(0) ? "parallel x" + std::to_string(max_threads()) : "serial");
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
  return v;
}

void BM_RadonTable(benchmark::State& st) {
  const RadialProfile f = two_gauss();
  for (auto _ : st) benchmark::DoNotOptimize(radon_table(f, cfg, 1.0 / 16, mode(st)));
  label(st);
}

void BM_HilbertSweep(benchmark::State& st) {
  const LineProfile phi{[](double v) { return cplx(std::exp(-v * v), 0); }, 6};
  const auto mus = linspace(-4, 4, 256);
  for (auto _ : st) benchmark::DoNotOptimize(hilbert_sweep(phi, mus, cfg, mode(st)));
  label(st);
}

void BM_ZollfreiScan(benchmark::State& st) {
  const RadialProfile f = RadialProfile::gaussian_mixture({{1.0, 1.0}});
  const auto c1s = linspace(-2, 2, 4), q1s = linspace(-1.5, 1.5, 4);
  for (auto _ : st) benchmark::DoNotOptimize(zollfrei_scan(f, c1s, q1s, 1e-6, cfg, mode(st)));
  label(st);
}

void BM_JumpScan(benchmark::State& st) {
  const OddProfile h = OddProfile::hermite({{1.0, 1.0}});
  const auto ss = linspace(-4, 4, 32);
  for (auto _ : st) benchmark::DoNotOptimize(jump_scan(h, ss, {0.5, 1.0, 2.0}, mode(st)));
  label(st);
}

}  // namespace

BENCHMARK(BM_RadonTable)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_HilbertSweep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ZollfreiScan)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_JumpScan)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
