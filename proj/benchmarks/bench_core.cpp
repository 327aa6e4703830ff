#include <random>

#include <benchmark/benchmark.h>

#include "nhme/dynamics.hpp"
#include "nhme/model.hpp"
#include "nhme/spectral.hpp"

using namespace nhme;

namespace {

ModelParams strong(double g) {
  ModelParams p;
  p.g = g;
  return p;  // defaults: alpha_c 0.2, alpha_h 0.05, T_h 1, T_c 0.1, omega_c 10
}

ComplexMatrix random_matrix(Eigen::Index n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d;
  ComplexMatrix m(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) m(i, j) = Complex(d(rng), d(rng));
  return m;
}

void BM_EigGeneral(benchmark::State& state) {
  const ComplexMatrix m = random_matrix(state.range(0), 1);
  for (auto _ : state) benchmark::DoNotOptimize(eig_general(m));
}
BENCHMARK(BM_EigGeneral)->Arg(4)->Arg(16);

void BM_Expm16(benchmark::State& state) {
  const ComplexMatrix l = build_liouvillian(strong(0.5), {Approach::local, JumpPolicy::full}).full * 0.1;
  for (auto _ : state) benchmark::DoNotOptimize(expm(l));
}
BENCHMARK(BM_Expm16);

void BM_BuildLiouvillian(benchmark::State& state) {
  const Approach a = state.range(0) ? Approach::global : Approach::local;
  for (auto _ : state) benchmark::DoNotOptimize(build_liouvillian(strong(0.5), {a, JumpPolicy::full}));
}
BENCHMARK(BM_BuildLiouvillian)->Arg(0)->Arg(1);

void BM_EpScanHeff(benchmark::State& state) {
  std::vector<double> grid;
  for (int k = 0; k <= 600; ++k) grid.push_back(0.001 * k);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ep_scan(strong(0.0), {Approach::local, JumpPolicy::full}, EPTarget::heff, grid));
  }
}
BENCHMARK(BM_EpScanHeff)->Unit(benchmark::kMillisecond);

void BM_Propagate(benchmark::State& state) {
  const ModelParams p = strong(0.33);
  const ComplexMatrix l = build_liouvillian(p, {Approach::local, JumpPolicy::none}).full;
  const ComplexMatrix rho0 = thermal_state(build_hamiltonian(p), p.T_h);
  const auto times = uniform_grid(40.0, 800);
  for (auto _ : state) benchmark::DoNotOptimize(propagate(l, rho0, times));
}
BENCHMARK(BM_Propagate)->Unit(benchmark::kMillisecond);

void BM_McUnraveling(benchmark::State& state) {
  const ModelParams p = strong(0.33);
  const ComplexMatrix rho0 = thermal_state(build_hamiltonian(p), p.T_h);
  const auto times = uniform_grid(1.0, 1000);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mc_unraveling(p, {Approach::local, JumpPolicy::full}, rho0, times, 256, 3, {NoJumpStep::exponential, 1}));
  }
  state.SetItemsProcessed(state.iterations() * 256 * 1000);
}
BENCHMARK(BM_McUnraveling)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
