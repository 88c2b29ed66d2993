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

#include <algorithm>
#include <cmath>
#include <limits>

#include "qarsim/solvers.hpp"

namespace qarsim {

cplx expectation(const DenseMat& rho, const Operator& obs) {
  if (rho.rows() != obs.dim() || rho.cols() != obs.dim())
    throw SpaceMismatchError("expectation: density matrix and observable sizes differ");
  const SparseMat& o = obs.matrix();
  cplx s = 0.0;
  for (int c = 0; c < o.outerSize(); ++c)
    for (SparseMat::InnerIterator it(o, c); it; ++it) s += it.value() * rho(c, it.row());
  if (obs.is_hermitian() && std::abs(s.imag()) > 1e-10 * std::max(1.0, obs.max_abs()))
    throw std::domain_error("expectation: Hermitian observable gave a complex value");
  return s;
}

HeatCurrent heat_current(const DenseMat& rho, const Operator& h_local,
                         std::span<const DissipatorTerm> terms) {
  const SparseMat& h = h_local.matrix();
  if (rho.rows() != h.rows() || rho.cols() != h.cols())
    throw SpaceMismatchError("heat_current: density matrix size");
  // Heisenberg form Tr[X D(ρ)] = r Tr[(L†XL − ½{L†L, X}) ρ], all sparse.
  SparseMat adj(h.rows(), h.cols());
  for (const auto& t : terms) {
    require_same_space(t.jump.space(), h_local.space(), "heat_current");
    if (t.rate <= 0.0) continue;
    const SparseMat& l = t.jump.matrix();
    const SparseMat ld = l.adjoint();
    const SparseMat ldl = ld * l;
    const SparseMat lxl = ld * (h * l);
    adj += t.rate * (lxl - 0.5 * (ldl * h + h * ldl));
  }
  cplx s = 0.0;
  for (int c = 0; c < adj.outerSize(); ++c)
    for (SparseMat::InnerIterator it(adj, c); it; ++it) s += it.value() * rho(c, it.row());
  return {s.real(), s.imag()};
}

std::vector<ReservoirFlow> reservoir_flows(const ModelSpec& model, const DenseMat& rho) {
  const Operator ledger = model.frame + model.hamiltonian;
  std::vector<ReservoirFlow> out;
  for (const auto& r : model.reservoirs) {
    const auto terms = r.all_terms();
    ReservoirFlow f{r.name, std::numeric_limits<double>::quiet_NaN(), 0.0, 0.0, 0.0};
    if (!r.subsystem.empty()) {
      const auto& factor = model.space->factor(r.subsystem);
      const Operator n = factor.kind == FactorKind::TwoLevel
                             ? excited_projector(model.space, r.subsystem)
                             : number_operator(model.space, r.subsystem);
      f.quanta_rate = heat_current(rho, n, terms).value;
    }
    f.power = model.units.hbar * heat_current(rho, model.local_energy, terms).value;
    for (const auto& t : terms) {
      const double q = model.units.hbar * heat_current(rho, ledger, std::span(&t, 1)).value;
      f.ledger_power += q;
      f.gross_power += std::abs(q);
    }
    out.push_back(f);
  }
  return out;
}

double first_law_residual(std::span<const ReservoirFlow> flows) {
  double sum = 0.0, largest = 0.0, gross = 0.0;
  for (const auto& f : flows) {
    sum += f.ledger_power;
    largest = std::max(largest, std::abs(f.ledger_power));
    gross = std::max(gross, f.gross_power);
  }
  // Near detailed balance every net flow is a cancellation between opposite
  // jump terms; below 1e-6 of the gross exchange it is not resolvable.
  const double scale = std::max(largest, 1e-6 * gross);
  return scale > 0.0 ? std::abs(sum) / scale : 0.0;
}

}  // namespace qarsim
