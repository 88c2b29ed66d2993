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

#include <string>
#include <utility>
#include <vector>

#include "qarsim/hilbert.hpp"
#include "qarsim/lindblad.hpp"
#include "qarsim/units.hpp"

namespace qarsim {

struct Reservoir {
  std::string name;
  std::vector<DissipatorTerm> terms;
  // Quadrature-node jumps, assembled as one group.
  std::vector<DissipatorTerm> family;
  // Lab energy of one exchanged quantum (rad/s); 0 for reservoirs whose jumps
  // mix several frequencies.
  double quantum = 0.0;
  // Subsystem whose quanta this reservoir exchanges (empty when mixed).
  std::string subsystem;

  std::vector<DissipatorTerm> all_terms() const;
};

using NamedOperator = std::pair<std::string, Operator>;

// Operators of a model before the superoperator is assembled. The Hamiltonian
// lives in a rotating frame generated by `frame`: the lab Hamiltonian is
// frame + hamiltonian and [frame, hamiltonian] = 0.
struct ModelSpec {
  SpacePtr space;
  Operator hamiltonian;
  Operator frame;
  // Sum of lab-frame bare subsystem energies (rad/s), ΣE_j N_j.
  Operator local_energy;
  std::vector<Reservoir> reservoirs;
  std::vector<NamedOperator> observables;
  std::vector<std::string> warnings;
  Units units;

  double estimated_nonzeros() const;
  const Reservoir& reservoir(const std::string& name) const;
  const Operator& observable(const std::string& name) const;
  bool has_observable(const std::string& name) const;
};

struct Model : ModelSpec {
  Superoperator generator;
};

Model assemble(ModelSpec spec);

}  // namespace qarsim
