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

#include "qarsim/crossed_cavity.hpp"

namespace qarsim {

bool RegimeReport::all_pass() const {
  return std::all_of(conditions.begin(), conditions.end(), [](const auto& c) { return c.pass; });
}

double RegimeReport::worst_margin() const {
  double m = 0.0;
  for (const auto& c : conditions) m = std::max(m, c.ratio / c.threshold);
  return m;
}

RegimeReport regime_diagnostics(const CrossedCavityParams& p, const RegimeThresholds& t) {
  RegimeReport r;
  const auto ions = p.ion_list();
  double detuning_ratio = 0.0;
  double recoil_ratio = 0.0;
  double k = 0.0;
  for (const auto& ion : ions) {
    const double gb = std::abs(ion.g_tilde_b() * ion.eta);
    const double hb = std::abs(ion.h_b());
    const double gc = std::abs(ion.g_tilde_c());
    const double strongest = std::max({gb, hb, gc});
    detuning_ratio = std::max(detuning_ratio, ion.detuning == 0.0
                                                  ? std::numeric_limits<double>::infinity()
                                                  : strongest / std::abs(ion.detuning));
    // Absent couplings (h_b = 0 at perfect alignment) impose nothing.
    double weakest = std::numeric_limits<double>::infinity();
    for (double g : {gb, hb, gc})
      if (g > 0.0) weakest = std::min(weakest, g);
    const double recoil = ion.eta * ion.eta * p.gamma_sp;
    recoil_ratio = std::max(recoil_ratio, recoil == 0.0 ? 0.0 : recoil / weakest);
    if (ion.detuning != 0.0) k += ion.g_tilde_b() * ion.g_tilde_c() * ion.eta / ion.detuning;
  }
  k = std::abs(k);
  CrossedCavityParams shifted = p;
  if (shifted.tier == CrossedTier::FullWithAtom) shifted.tier = CrossedTier::EffectiveFull;
  const double de = effective_coefficients(shifted).max_shift();
  const double slow = std::max({k, p.kappa_b, p.kappa_c, de});

  auto add = [&](const char* name, const char* text, double ratio, double threshold) {
    r.conditions.push_back({name, text, ratio, threshold, ratio <= threshold});
  };
  add("detuning", "max(g_b*eta, h_b, g_c) / |Delta|", detuning_ratio, t.much_less);
  add("recoil", "eta^2*Gamma / min(g_b*eta, h_b, g_c)", recoil_ratio, t.lesssim);
  add("born_markov", "max(k, kappa_b, kappa_c, dE) / Gamma",
      p.gamma_sp > 0.0 ? slow / p.gamma_sp : std::numeric_limits<double>::infinity(),
      t.much_less);
  add("sideband_resolved", "max(k, kappa_b, kappa_c, dE) / nu", slow / p.nu, t.much_less);
  r.k = k;
  r.delta_e = de;
  return r;
}

}  // namespace qarsim
