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
// qarsim command-line driver.

#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include "CLI11.hpp"
#include "qarsim/experiment.hpp"
#include "qarsim/output.hpp"

namespace {

using namespace qarsim;
using namespace qarsim::cli;

enum Exit { kOk = 0, kConfig = 2, kSolver = 3, kMemory = 4 };

struct Common {
  std::string config;
  std::string out;
  int threads = 0;
  std::string format = "csv";
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config, "experiment config file")->required()->check(CLI::ExistingFile);
  sub->add_option("--out", c.out, "output path (default: output.* key, else stdout)");
  sub->add_option("--threads", c.threads, "worker threads (overrides config and QARSIM_THREADS)")
      ->check(CLI::PositiveNumber);
  sub->add_option("--format", c.format, "output format")->check(CLI::IsMember({"csv", "json"}));
}

// Writes to --out, else the config's output path for the chosen format, else stdout.
template <class Fn>
void emit(const Common& c, const ExperimentConfig& cfg, Fn&& write) {
  std::string path = c.out;
  if (path.empty()) path = c.format == "json" ? cfg.output_json : cfg.output_csv;
  if (path.empty() || path == "-") {
    write(std::cout, c.format == "json");
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open output '" + path + "'", 0, "output");
  write(f, c.format == "json");
}

// JSON sidecar from output.json when the primary stream is CSV.
template <class Fn>
void sidecar(const Common& c, const ExperimentConfig& cfg, Fn&& write) {
  if (c.format != "csv" || cfg.output_json.empty()) return;
  std::ofstream f(cfg.output_json, std::ios::binary);
  if (!f) throw ConfigError("cannot open output '" + cfg.output_json + "'", 0, "output.json");
  write(f, true);
}

int sweep_exit(const SweepResult& r) {
  int code = kOk;
  for (const auto& row : r.rows) {
    switch (row.failure) {
      case SteadyRow::Failure::Memory: code = std::max<int>(code, kMemory); break;
      case SteadyRow::Failure::Solver: code = std::max<int>(code, kSolver); break;
      case SteadyRow::Failure::Config: code = std::max<int>(code, kConfig); break;
      case SteadyRow::Failure::None: break;
    }
    if (!row.error.empty()) std::cerr << "point " << row.index << ": " << row.error << "\n";
  }
  return code;
}

int run(const std::string& verb, const Common& c) {
  const RawConfig raw = RawConfig::load(c.config);
  if (verb == "validate-config") {
    const ExperimentConfig cfg = resolve(raw);
    for (const auto& [k, v] : cfg.resolved) std::cout << k << " = " << v << "\n";
    return kOk;
  }
  if (verb == "steady" || verb == "sweep") {
    const SweepResult r = verb == "steady" ? run_steady(raw, c.threads) : run_sweep(raw, c.threads);
    auto w = [&](std::ostream& os, bool json) { json ? write_json(os, r, verb) : write_csv(os, r, verb); };
    emit(c, r.config, w);
    sidecar(c, r.config, w);
    return sweep_exit(r);
  }
  if (verb == "evolve") {
    const EvolveResult r = run_evolve(raw);
    auto w = [&](std::ostream& os, bool json) { json ? write_json(os, r) : write_csv(os, r); };
    emit(c, r.config, w);
    sidecar(c, r.config, w);
    return kOk;
  }
  const Report r = verb == "diagnose" ? run_diagnose(raw) : run_compare(raw);
  auto w = [&](std::ostream& os, bool json) { json ? write_json(os, r, verb) : write_csv(os, r, verb); };
  emit(c, r.config, w);
  sidecar(c, r.config, w);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qarsim: quantum absorption refrigerator simulator"};
  app.require_subcommand(1);
  Common common;
  const char* verbs[][2] = {
      {"steady", "steady state at a single parameter point"},
      {"sweep", "steady states over the configured grid"},
      {"evolve", "time evolution from a thermal product state"},
      {"diagnose", "regime-of-validity report"},
      {"compare", "full vs effective vs analytic comparison"},
      {"validate-config", "parse, resolve and print a config"},
  };
  for (auto& v : verbs) add_common(app.add_subcommand(v[0], v[1]), common);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kConfig;
  }
  const std::string verb = app.get_subcommands().front()->get_name();
  try {
    return run(verb, common);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const MemoryBudgetError& e) {
    std::cerr << "memory pre-flight: " << e.what() << "\n";
    return kMemory;
  } catch (const SolverError& e) {
    std::cerr << "solver: " << e.what() << "\n";
    return kSolver;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kSolver;
  }
}
