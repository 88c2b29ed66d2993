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

#include "qarsim/model.hpp"

#include <stdexcept>

namespace qarsim {

std::vector<DissipatorTerm> Reservoir::all_terms() const {
  std::vector<DissipatorTerm> out = terms;
  out.insert(out.end(), family.begin(), family.end());
  return out;
}

namespace {

void split(const ModelSpec& spec, std::vector<DissipatorTerm>& terms,
           std::vector<std::vector<DissipatorTerm>>& families) {
  for (const auto& r : spec.reservoirs) {
    for (const auto& t : r.terms)
      if (t.rate > 0.0) terms.push_back(t);
    if (!r.family.empty()) families.push_back(r.family);
  }
}

}  // namespace

double ModelSpec::estimated_nonzeros() const {
  std::vector<DissipatorTerm> terms;
  std::vector<std::vector<DissipatorTerm>> families;
  split(*this, terms, families);
  return estimate_generator_nonzeros(hamiltonian, terms, families);
}

const Reservoir& ModelSpec::reservoir(const std::string& name) const {
  for (const auto& r : reservoirs)
    if (r.name == name) return r;
  throw std::invalid_argument("model has no reservoir '" + name + "'");
}

const Operator& ModelSpec::observable(const std::string& name) const {
  for (const auto& [n, op] : observables)
    if (n == name) return op;
  throw std::invalid_argument("model has no observable '" + name + "'");
}

bool ModelSpec::has_observable(const std::string& name) const {
  for (const auto& o : observables)
    if (o.first == name) return true;
  return false;
}

Model assemble(ModelSpec spec) {
  std::vector<DissipatorTerm> terms;
  std::vector<std::vector<DissipatorTerm>> families;
  split(spec, terms, families);
  Superoperator gen = lindblad_generator(spec.hamiltonian, terms, families);
  return Model{std::move(spec), std::move(gen)};
}

}  // namespace qarsim
