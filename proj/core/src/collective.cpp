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

#include <cmath>
#include <stdexcept>

#include "qarsim/crossed_cavity.hpp"
#include "qarsim/units.hpp"

namespace qarsim {

double collective_coupling(const IonArrayParams& array) {
  if (array.ions.empty()) throw std::invalid_argument("collective_coupling: empty ion list");
  double k = 0.0;
  for (const auto& ion : array.ions) {
    if (ion.detuning == 0.0) throw std::invalid_argument("collective_coupling: zero detuning");
    k += ion.g_tilde_b() * ion.g_tilde_c() * ion.eta / ion.detuning;
  }
  return k;
}

double misalignment_phase(double distance_m, double omega) {
  return distance_m * omega / PhysicalConstants::c0;
}

}  // namespace qarsim
