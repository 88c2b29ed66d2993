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

#include <optional>
#include <string>
#include <vector>

#include "qarsim/config.hpp"

namespace qarsim::cli {

// Column order of steady/sweep tables after the index and axis columns.
const std::vector<std::string>& steady_columns();

struct SteadyRow {
  int index = 0;
  std::vector<double> axis;
  std::vector<std::optional<double>> values;  // parallel to steady_columns()
  std::string method;
  long long reduced_size = 0;
  bool degenerate = false;
  std::optional<bool> regime_pass;
  std::vector<std::string> warnings;
  std::string error;
  enum class Failure { None, Config, Solver, Memory } failure = Failure::None;
  double wall_seconds = 0.0;

  std::optional<double> value(const std::string& column) const;
};

struct SweepResult {
  ExperimentConfig config;
  std::vector<std::string> axis_paths;
  std::vector<SteadyRow> rows;
  int threads = 1;
  double wall_seconds = 0.0;
};

struct EvolveResult {
  ExperimentConfig config;
  Trajectory trajectory;
  double t_end = 0.0;
  double wall_seconds = 0.0;
};

struct ReportRow {
  std::string item;
  std::optional<double> value;
  std::optional<double> threshold;
  std::optional<bool> pass;
  std::string note;
};

struct Report {
  ExperimentConfig config;
  std::vector<ReportRow> rows;
  double wall_seconds = 0.0;
};

// Worker count: explicit override, then the config key, then QARSIM_THREADS, then 1.
int resolve_threads(const ExperimentConfig& cfg, int override_threads = 0);

// Builds the model described by `cfg` at its base point, without sweeps.
ModelSpec model_spec(const ExperimentConfig& cfg);

// Throws MemoryBudgetError when assembling the generator would exceed the budget.
void memory_preflight(const ModelSpec& spec, const SteadyStateOptions& options);

SweepResult run_steady(const RawConfig& raw, int threads = 0);
SweepResult run_sweep(const RawConfig& raw, int threads = 0);
EvolveResult run_evolve(const RawConfig& raw);
Report run_diagnose(const RawConfig& raw);
Report run_compare(const RawConfig& raw);

// Thermal, Fock-diagonal product state with the given means (σ in its ground state).
DenseMat thermal_product_state(const CompositeSpace& space, const std::vector<double>& means);

}  // namespace qarsim::cli
