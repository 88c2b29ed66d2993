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

#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "qarsim/lindblad.hpp"
#include "qarsim/model.hpp"

namespace qarsim {

enum class SteadyMethod { Auto, SparseLu, DenseLu, InverseIteration, DenseEigen };

const char* to_string(SteadyMethod m);
SteadyMethod steady_method_from_string(const std::string& s);

struct SteadyStateOptions {
  SteadyMethod method = SteadyMethod::Auto;
  // Below this Hilbert dimension a failed LU falls back to a full eigensolve.
  int dense_fallback_dim = 40;
  // Reduced systems at least this dense (and small enough) use dense LU.
  double dense_lu_min_density = 0.01;
  long long dense_lu_max_size = 8000;
  double positivity_floor = 1e-8;
  bool reduce_sectors = true;
  int max_iterations = 50;
  double tolerance = 1e-13;
  double memory_budget_bytes = 8.0 * (1ull << 30);
  double lu_fill_factor = 30.0;
};

struct SteadyStateResult {
  DenseMat rho;
  double residual = 0.0;           // ‖𝓛 vec ρ‖₂
  double relative_residual = 0.0;  // residual / ‖𝓛‖₁
  double generator_norm = 0.0;
  double trace_defect = 0.0;
  double hermiticity_defect = 0.0;
  double min_eigenvalue = 0.0;
  double clipped_weight = 0.0;
  SteadyMethod method = SteadyMethod::Auto;
  int iterations = 0;
  long long reduced_size = 0;
  int diagonal_sectors = 0;
  bool degenerate = false;
};

SteadyStateResult steady_state(const Superoperator& gen, const SteadyStateOptions& options = {});

// Connected components of the sparsity graph of `gen` over vectorized
// indices. Weak symmetries make 𝓛 block-diagonal in these.
struct SectorPartition {
  std::vector<int> label;  // component id per vectorized index
  int count = 0;
};
SectorPartition structural_sectors(const Superoperator& gen);

struct EvolveOptions {
  double rtol = 1e-8;
  double atol = 1e-12;
  double initial_step = 0.0;  // 0: automatic
  double min_step = 0.0;      // 0: 1e-14 of the horizon
  long long max_steps = 50'000'000;
  bool renormalize_trace = false;
  bool reduce_sectors = true;
  bool store_states = false;
};

struct Trajectory {
  std::vector<double> times;
  std::map<std::string, std::vector<double>> tracks;
  std::vector<double> trace;
  std::vector<DenseMat> states;
  long long accepted_steps = 0;
  long long rejected_steps = 0;
  double max_trace_drift = 0.0;
};

Trajectory evolve(const Superoperator& gen, const DenseMat& rho0, std::span<const double> t_grid,
                  std::span<const NamedOperator> observables, const EvolveOptions& options = {});

cplx expectation(const DenseMat& rho, const Operator& obs);

struct HeatCurrent {
  double value;  // Tr[H·Σ D_k ρ], units of H per unit time
  double imag;
};

HeatCurrent heat_current(const DenseMat& rho, const Operator& h_local,
                         std::span<const DissipatorTerm> terms);

struct ReservoirFlow {
  std::string name;
  double quanta_rate;   // Tr[N_j D_j ρ]; NaN when the reservoir mixes subsystems
  double power;         // ħ·Tr[H_loc D_j ρ] (W in SI units)
  double ledger_power;  // ħ·Tr[(G + H) D_j ρ], sums to zero at stationarity
  double gross_power;   // Σ_k |ledger share of jump k|
};

std::vector<ReservoirFlow> reservoir_flows(const ModelSpec& model, const DenseMat& rho);

// |Σ_j ledger_power| / max_j |ledger_power|, floored at 1e-6 of the largest
// gross_power
double first_law_residual(std::span<const ReservoirFlow> flows);

double trace_distance(const DenseMat& a, const DenseMat& b);

}  // namespace qarsim
