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

#include "qarsim/units.hpp"

namespace qarsim {

// (e^{ħω/k_BT} − 1)⁻¹, e^{−ħω/k_BT} once the exponent exceeds 700.
double bose_occupation(double omega, double temperature, const Units& units = Units::si());

enum class MachineMode { Refrigerator, HeatPump, Inversion };

const char* to_string(MachineMode mode);

struct VirtualTemperature {
  double kelvin;
  MachineMode mode;
};

// T_v = E_A / (E_C/T_r − E_B/T_h). Pass T_h = +infinity for the hot-bath limit.
// Energies enter only as ratios, so the unit system drops out.
VirtualTemperature virtual_temperature(double e_a, double e_b, double e_c, double t_room,
                                       double t_hot);

double coefficient_of_performance(double e_a, double e_b);

}  // namespace qarsim
