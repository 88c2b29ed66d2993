// Copyright 2025 The qarsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include <numbers>

#include "qarsim/crossed_cavity.hpp"
#include "qarsim/single_cavity.hpp"
#include "qarsim/solvers.hpp"

namespace {

using namespace qarsim;

CrossedCavityParams table1(int d_phonon) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  CrossedCavityParams p;
  p.nu = two_pi * 5e6;
  p.epsilon = two_pi * 8.1e14;
  p.detuning = two_pi * 1e8;
  p.g_b = p.g_c = two_pi * 2.5e7;
  p.eta = 0.041;
  p.gamma_sp = two_pi * 2e7;
  p.kappa_b = p.kappa_c = two_pi * 5e5;
  p.lambda = 10.0;
  p.t_hot = 5800.0;
  p.t_room = 300.0;
  p.d_phonon = d_phonon;
  p.d_photon_b = p.d_photon_c = 4;
  p.compensate_shifts = true;
  return p;
}

SingleCavityParams single(int points) {
  SingleCavityParams p;
  p.units = Units::natural();
  p.nu = 1.0;
  p.epsilon = 100.0;
  p.g = 1.0;
  p.eta = 0.05;
  p.kappa = 1.0;
  p.gamma_sp = 1.0;
  p.nbar_b = 1e-3;
  p.d_phonon = 21;
  p.d_photon = 4;
  p.quadrature_points = points;
  return p;
}

void BM_AssembleEffective(benchmark::State& state) {
  const auto spec = crossed_effective_spec(table1(static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(assemble(spec).generator.matrix().nonZeros());
  state.counters["dim"] = spec.space->dim();
}
BENCHMARK(BM_AssembleEffective)->Arg(11)->Arg(31)->Arg(71)->Unit(benchmark::kMillisecond);

void BM_AssembleSingleRecoil(benchmark::State& state) {
  const auto spec = single_cavity_spec(single(static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(assemble(spec).generator.matrix().nonZeros());
}
BENCHMARK(BM_AssembleSingleRecoil)->Arg(25)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_SteadyEffective(benchmark::State& state) {
  const Model m = build_crossed_effective(table1(static_cast<int>(state.range(0))));
  SteadyStateResult r;
  for (auto _ : state) {
    r = steady_state(m.generator);
    benchmark::DoNotOptimize(r.rho.data());
  }
  state.counters["reduced"] = static_cast<double>(r.reduced_size);
}
BENCHMARK(BM_SteadyEffective)->Arg(11)->Arg(31)->Unit(benchmark::kMillisecond);

void BM_SteadySparseVsDense(benchmark::State& state) {
  const Model m = build_crossed_effective(table1(21));
  SteadyStateOptions o;
  o.method = state.range(0) ? SteadyMethod::DenseLu : SteadyMethod::SparseLu;
  for (auto _ : state) benchmark::DoNotOptimize(steady_state(m.generator, o).rho.data());
}
BENCHMARK(BM_SteadySparseVsDense)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Evolve(benchmark::State& state) {
  const Model m = build_crossed_effective(table1(11));
  DenseMat rho0 = DenseMat::Zero(m.space->dim(), m.space->dim());
  rho0(0, 0) = 1.0;
  const double t_end = 20.0 / m.generator.norm1();
  const std::vector<double> grid{0.0, 0.5 * t_end, t_end};
  for (auto _ : state) benchmark::DoNotOptimize(evolve(m.generator, rho0, grid, {}).trace.back());
}
BENCHMARK(BM_Evolve)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
