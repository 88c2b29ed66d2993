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

namespace qarsim {

struct PhysicalConstants {
  static constexpr double hbar = 1.054571817e-34;        // J·s
  static constexpr double k_boltzmann = 1.380649e-23;    // J/K
  static constexpr double c0 = 299792458.0;              // m/s
};

// Conversion between angular frequency and temperature. Natural units set
// ħ = k_B = 1 so frequencies and temperatures share one scale.
struct Units {
  double hbar = PhysicalConstants::hbar;
  double kb = PhysicalConstants::k_boltzmann;

  static Units si() { return {}; }
  static Units natural() { return {1.0, 1.0}; }
  bool is_natural() const { return hbar == 1.0 && kb == 1.0; }
  // ħω / k_B T
  double reduced_energy(double omega, double temperature) const {
    return hbar * omega / (kb * temperature);
  }
};

}  // namespace qarsim
