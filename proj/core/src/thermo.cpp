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

#include "qarsim/thermo.hpp"

#include <cmath>
#include <stdexcept>

namespace qarsim {

double bose_occupation(double omega, double temperature, const Units& units) {
  if (!(omega > 0.0) || !(temperature > 0.0))
    throw std::invalid_argument("bose_occupation: frequency and temperature must be positive");
  const double x = units.reduced_energy(omega, temperature);
  if (x > 700.0) return std::exp(-x);
  return 1.0 / std::expm1(x);
}

const char* to_string(MachineMode mode) {
  switch (mode) {
    case MachineMode::Refrigerator: return "refrigerator";
    case MachineMode::HeatPump: return "heat_pump";
    case MachineMode::Inversion: return "inversion";
  }
  return "unknown";
}

VirtualTemperature virtual_temperature(double e_a, double e_b, double e_c, double t_room,
                                       double t_hot) {
  if (!(t_room > 0.0) || !(t_hot > 0.0))
    throw std::invalid_argument("virtual_temperature: temperatures must be positive");
  const double scale = std::max({std::abs(e_a), std::abs(e_b), std::abs(e_c)});
  if (std::abs(e_a + e_b - e_c) > 1e-9 * scale)
    throw std::invalid_argument("virtual_temperature: resonance E_A + E_B = E_C violated");
  const double hot_term = std::isinf(t_hot) ? 0.0 : e_b / t_hot;
  const double denom = e_c / t_room - hot_term;
  if (denom == 0.0) throw std::invalid_argument("virtual_temperature: vanishing denominator");
  const double tv = e_a / denom;
  MachineMode mode = MachineMode::Refrigerator;
  if (tv < 0.0)
    mode = MachineMode::Inversion;
  else if (tv > t_room)
    mode = MachineMode::HeatPump;
  return {tv, mode};
}

double coefficient_of_performance(double e_a, double e_b) {
  if (!(e_b > 0.0)) throw std::invalid_argument("coefficient_of_performance: E_B must be positive");
  return e_a / e_b;
}

}  // namespace qarsim
