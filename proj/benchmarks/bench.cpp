#include <benchmark/benchmark.h>

#include "ofront/coefficients.hpp"
#include "ofront/lattice.hpp"
#include "ofront/phase.hpp"
#include "ofront/wave.hpp"

using namespace ofront;

namespace {

const WaveSolution& wave_2_3() {
  static const WaveSolution w = [] {
    const Direction d = make_direction(2, 3);
    return solve_wave(d, make_nonlinearity(0.45, 6.0), default_grid(d));
  }();
  return w;
}

KernelSpec kernel_2_3() {
  AuxiliaryResult r = compute_auxiliary(wave_2_3());
  curvature_parameters(r.coeffs, nullptr);
  return make_kernel(r.coeffs);
}

void BM_SolveWave(benchmark::State& st) {
  const Direction d = make_direction(static_cast<int>(st.range(0)), static_cast<int>(st.range(1)));
  const Nonlinearity g = make_nonlinearity(0.45, 6.0);
  for (auto _ : st) benchmark::DoNotOptimize(solve_wave(d, g, default_grid(d)).c);
}
BENCHMARK(BM_SolveWave)->Args({1, 0})->Args({2, 3})->Args({2, 5})->Unit(benchmark::kMillisecond);

void BM_Auxiliary(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(compute_auxiliary(wave_2_3()).coeffs.Lambda);
}
BENCHMARK(BM_Auxiliary)->Unit(benchmark::kMillisecond);

void BM_Greens(benchmark::State& st) {
  const KernelSpec k = kernel_2_3();
  for (auto _ : st) benchmark::DoNotOptimize(greens_function(k, static_cast<double>(st.range(0)), -500, 500).mass);
}
BENCHMARK(BM_Greens)->Arg(1)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_LinearEvolve(benchmark::State& st) {
  const KernelSpec k = kernel_2_3();
  const PhaseField sq = square_wave(static_cast<int>(st.range(0)), 1.0);
  for (auto _ : st) benchmark::DoNotOptimize(linear_evolve(k, sq, 50.0).theta.data());
}
BENCHMARK(BM_LinearEvolve)->Arg(1024)->Arg(8192)->Unit(benchmark::kMicrosecond);

void BM_LatticeEvolve(benchmark::State& st) {
  const Profile prof(wave_2_3());
  InitialParams ip;
  ip.kind = InitialKind::rippled;
  ip.P = static_cast<int>(st.range(0));
  ip.T_run = 10.0;
  const LatticeState s0 = build_initial(prof, wave_2_3().dir, wave_2_3().nonlin, ip);
  for (auto _ : st) benchmark::DoNotOptimize(evolve(s0, 10.0, 0.1).back().u.data());
  st.counters["sites"] = static_cast<double>(s0.u.size());
}
BENCHMARK(BM_LatticeEvolve)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_ExtractPhase(benchmark::State& st) {
  const Profile prof(wave_2_3());
  InitialParams ip;
  ip.kind = InitialKind::rippled;
  ip.P = 4;
  const LatticeState s0 = build_initial(prof, wave_2_3().dir, wave_2_3().nonlin, ip);
  for (auto _ : st) benchmark::DoNotOptimize(extract_phase(s0, prof).entries.size());
}
BENCHMARK(BM_ExtractPhase)->Unit(benchmark::kMicrosecond);

}  // namespace
BENCHMARK_MAIN();
