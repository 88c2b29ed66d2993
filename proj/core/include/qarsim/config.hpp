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
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qarsim/crossed_cavity.hpp"
#include "qarsim/single_cavity.hpp"
#include "qarsim/solvers.hpp"
#include "qarsim/types.hpp"

namespace qarsim::cli {

class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, int line = 0, std::string key = {})
      : Error(format(what, line, key)), line_(line), key_(std::move(key)) {}
  int line() const noexcept { return line_; }
  const std::string& key() const noexcept { return key_; }

 private:
  static std::string format(const std::string& what, int line, const std::string& key);
  int line_;
  std::string key_;
};

struct ConfigEntry {
  std::string value;
  int line = 0;  // 0 for values injected by sweeps or defaults
};

// Flat `dotted.key = value` text, `#` comments.
struct RawConfig {
  std::map<std::string, ConfigEntry> entries;
  std::string source = "<string>";

  static RawConfig parse(std::string_view text, std::string source = "<string>");
  static RawConfig load(const std::string& path);
  void set(const std::string& key, std::string value);
};

enum class KeyKind { Real, Integer, Choice, Text, Flag };

struct KeySpec {
  std::string key;
  KeyKind kind;
  std::string default_value;
  std::string doc;
  std::vector<std::string> choices;
  bool allow_auto = false;
};

// Every accepted key except the indexed `sweep.N.*` and `model.ions.N.*` families.
const std::vector<KeySpec>& config_schema();
// Whether `key` is a numeric parameter a sweep axis may drive.
bool is_sweepable(const std::string& key);

struct SweepAxis {
  std::string path;
  double min = 0.0;
  double max = 0.0;
  int count = 1;
  bool log = false;

  std::vector<double> values() const;
};

enum class ModelKind { Single, Crossed };

struct EvolveSettings {
  std::optional<double> t_end;  // seconds; unset: relaxation_times / cooling rate
  double relaxation_times = 5.0;
  int points = 101;
  double n_a = 0.0;
  double n_b = 0.0;
  double n_c = 0.0;
  double rtol = 1e-8;
  double atol = 1e-12;
};

struct CompareSettings {
  bool include_full = false;
  bool fit = true;
};

struct ExperimentConfig {
  std::string name;
  std::string source;
  ModelKind kind = ModelKind::Crossed;
  bool natural_units = false;
  SingleCavityParams single;
  CrossedCavityParams crossed;
  SteadyStateOptions solver;
  RegimeThresholds thresholds;
  std::vector<SweepAxis> axes;
  EvolveSettings evolve;
  CompareSettings compare;
  int threads = 0;  // 0: QARSIM_THREADS or 1
  long long seed = 0;
  std::string output_csv;
  std::string output_json;
  // key = value for every schema key, defaults filled in, in schema order,
  // followed by derived.* quantities.
  std::vector<std::pair<std::string, std::string>> resolved;
};

ExperimentConfig resolve(const RawConfig& raw);

// Shortest round-trip decimal form.
std::string format_number(double v);

}  // namespace qarsim::cli
