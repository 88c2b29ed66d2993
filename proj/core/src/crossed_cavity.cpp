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

#include "qarsim/crossed_cavity.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "qarsim/analytics.hpp"
#include "qarsim/thermo.hpp"

namespace qarsim {

const char* to_string(CrossedTier tier) {
  switch (tier) {
    case CrossedTier::FullWithAtom: return "full_with_atom";
    case CrossedTier::EffectiveFull: return "effective_full";
    case CrossedTier::EffectiveLargeDelta: return "effective_large_delta";
  }
  return "unknown";
}

const char* to_string(CavityDrive drive) {
  return drive == CavityDrive::OneSided ? "one_sided" : "two_sided";
}

double IonCoupling::g_tilde_b() const { return g_b * std::cos(delta_b); }
double IonCoupling::g_tilde_c() const { return g_c * std::cos(delta_c); }
double IonCoupling::h_b() const { return g_b * std::sin(delta_b); }

double CrossedCavityParams::g_tilde_b() const { return g_b * std::cos(delta_b); }
double CrossedCavityParams::g_tilde_c() const { return g_c * std::cos(delta_c); }
double CrossedCavityParams::h_b() const { return g_b * std::sin(delta_b); }

double CrossedCavityParams::nbar_b() const { return bose_occupation(omega_b(), t_hot, units); }
double CrossedCavityParams::nbar_c() const { return bose_occupation(omega_c(), t_room, units); }

double CrossedCavityParams::resolved_nbar_a_inv() const {
  if (nbar_a_inv) return *nbar_a_inv;
  return 1.0 / bose_occupation(nu, t_room, units);
}

double CrossedCavityParams::cavity_b_occupation() const {
  return drive_b == CavityDrive::OneSided ? 0.5 * nbar_b() : nbar_b();
}

std::vector<IonCoupling> CrossedCavityParams::ion_list() const {
  if (!ions.empty()) return ions;
  return {IonCoupling{g_b, g_c, eta, delta_b, delta_c, detuning}};
}

void CrossedCavityParams::validate() const {
  auto nonneg = [](double v, const char* name) {
    if (!(v >= 0.0) || !std::isfinite(v))
      throw std::invalid_argument(std::string("crossed cavity: ") + name +
                                  " must be finite and nonnegative");
  };
  if (!(nu > 0.0)) throw std::invalid_argument("crossed cavity: nu must be positive");
  if (!(epsilon > 0.0)) throw std::invalid_argument("crossed cavity: epsilon must be positive");
  if (!(omega_b() > 0.0)) throw std::invalid_argument("crossed cavity: omega_b must be positive");
  if (!(t_hot > 0.0) || !(t_room > 0.0))
    throw std::invalid_argument("crossed cavity: temperatures must be positive");
  nonneg(g_b, "g_b");
  nonneg(g_c, "g_c");
  nonneg(kappa_b, "kappa_b");
  nonneg(kappa_c, "kappa_c");
  nonneg(lambda, "lambda");
  nonneg(gamma_sp, "gamma");
  nonneg(nbar_sigma, "nbar_sigma");
  if (nbar_a_inv) nonneg(*nbar_a_inv, "nbar_a_inv");
  if (d_phonon < 2 || d_photon_b < 2 || d_photon_c < 2)
    throw std::invalid_argument("crossed cavity: truncations must be >= 2");
  for (const auto& ion : ion_list())
    if (tier != CrossedTier::FullWithAtom && ion.detuning == 0.0 && gamma_sp == 0.0)
      throw std::invalid_argument("crossed cavity: zero detuning with zero linewidth");
  if (tier == CrossedTier::FullWithAtom && !ions.empty())
    throw std::invalid_argument("crossed cavity: the full model holds a single ion");
}

double EffectiveCoefficients::max_shift() const {
  return std::max({std::abs(shift_ab), std::abs(shift_b), std::abs(shift_c)});
}

namespace {

struct Lorentz {
  double rate;   // Γ/(Γ²/4 + x²)
  double shift;  // x/(Γ²/4 + x²)
};

Lorentz lorentz(double x, double gamma) {
  const cplx g = spectral_correlation(x, 0.0, gamma);
  return {2.0 * g.real(), g.imag()};
}

}  // namespace

EffectiveCoefficients effective_coefficients(const CrossedCavityParams& p) {
  EffectiveCoefficients out;
  const bool large = p.tier == CrossedTier::EffectiveLargeDelta;
  for (const auto& ion : p.ion_list()) {
    const double gb = ion.g_tilde_b() * ion.eta;
    const double gc = ion.g_tilde_c();
    const double hb = ion.h_b();
    const double d = ion.detuning;
    if (large) {
      if (d == 0.0) throw std::invalid_argument("large-detuning tier needs nonzero detuning");
      out.shift_c += gc * gc / d;
      out.v_eff += gb * gc / d;
      out.channels.push_back({p.gamma_sp / (d * d), gb, gc, 0.0, 0.0});
      continue;
    }
    const Lorentz l0 = lorentz(d, p.gamma_sp);
    const Lorentz l1 = lorentz(d - p.nu, p.gamma_sp);
    const Lorentz l2 = lorentz(d - 2.0 * p.nu, p.gamma_sp);
    out.shift_ab += gb * gb * (l0.shift + l2.shift);
    out.shift_b += gb * gb * l2.shift + hb * hb * l1.shift;
    out.shift_c += gc * gc * l0.shift;
    out.v_eff += gb * gc * l0.shift;
    out.channels.push_back({l0.rate, gb, gc, gb * gb * l2.rate, hb * hb * l1.rate});
  }
  return out;
}

namespace {

Reservoir one_sided_reservoir(const SpacePtr& space, const char* mode, double kappa, double nbar,
                              double quantum) {
  Reservoir r{mode, {}, {}, quantum, mode};
  const Operator b = annihilation(space, mode);
  r.terms.push_back({kappa * (2.0 + nbar), b});
  r.terms.push_back({kappa * nbar, b.adjoint()});
  return r;
}

void add_common_reservoirs(ModelSpec& spec, const CrossedCavityParams& p) {
  const auto& space = spec.space;
  spec.reservoirs.push_back(
      phonon_heating_reservoir(space, "a", p.lambda, p.resolved_nbar_a_inv(), p.nu));
  if (p.drive_b == CavityDrive::OneSided)
    spec.reservoirs.push_back(one_sided_reservoir(space, "b", p.kappa_b, p.nbar_b(), p.omega_b()));
  else
    spec.reservoirs.push_back(
        thermal_cavity_reservoir(space, "b", p.kappa_b, p.nbar_b(), p.omega_b()));
  spec.reservoirs.push_back(
      thermal_cavity_reservoir(space, "c", p.kappa_c, p.nbar_c(), p.omega_c()));
}

}  // namespace

ModelSpec crossed_full_spec(const CrossedCavityParams& p) {
  p.validate();
  auto space = CompositeSpace::make({SubsystemSpec::boson("a", p.d_phonon),
                                     SubsystemSpec::boson("b", p.d_photon_b),
                                     SubsystemSpec::boson("c", p.d_photon_c),
                                     SubsystemSpec::two_level("sigma")});
  const Operator na = number_operator(space, "a");
  const Operator nb = number_operator(space, "b");
  const Operator nc = number_operator(space, "c");
  const Operator pe = excited_projector(space, "sigma");
  const Operator a = annihilation(space, "a");
  const Operator b = annihilation(space, "b");
  const Operator c = annihilation(space, "c");
  const Operator sm = sigma_minus(space, "sigma");
  const Operator sp = sigma_plus(space, "sigma");

  // Frame ω_c(b†b + c†c + σ⁺σ⁻): b keeps −ν, σ keeps −Δ.
  const Operator frame = p.omega_c() * (nb + nc + pe);
  Operator h = p.nu * (na - nb) - p.detuning * pe;
  const Operator b_hop = b * sp + b.adjoint() * sm;
  h += (p.g_tilde_b() * p.eta) * ((a + a.adjoint()) * b_hop);
  h += p.g_tilde_c() * (c * sp + c.adjoint() * sm);
  h += p.h_b() * b_hop;
  if (p.compensate_shifts) {
    CrossedCavityParams q = p;
    q.tier = CrossedTier::EffectiveFull;
    const EffectiveCoefficients k = effective_coefficients(q);
    h -= k.shift_b * nb + k.shift_c * nc;
  }

  const Operator local = p.nu * na + p.omega_b() * nb + p.omega_c() * nc + p.epsilon * pe;
  ModelSpec spec{space, h, frame, local, {}, {}, {}, p.units};
  add_common_reservoirs(spec, p);
  spec.reservoirs.push_back(recoil_reservoir(space, "a", "sigma", p.gamma_sp, p.nbar_sigma, p.eta,
                                             p.quadrature_points, p.quadrature, p.epsilon));
  spec.observables = {{"n_a", na}, {"n_b", nb}, {"n_c", nc}, {"p_e", pe}};
  return spec;
}

ModelSpec crossed_effective_spec(const CrossedCavityParams& p) {
  p.validate();
  if (p.tier == CrossedTier::FullWithAtom)
    throw std::invalid_argument("crossed_effective_spec: tier must be an effective tier");
  auto space = CompositeSpace::make({SubsystemSpec::boson("a", p.d_phonon),
                                     SubsystemSpec::boson("b", p.d_photon_b),
                                     SubsystemSpec::boson("c", p.d_photon_c)});
  const Operator na = number_operator(space, "a");
  const Operator nb = number_operator(space, "b");
  const Operator nc = number_operator(space, "c");
  const Operator a = annihilation(space, "a");
  const Operator b = annihilation(space, "b");
  const Operator c = annihilation(space, "c");

  const EffectiveCoefficients k = effective_coefficients(p);
  // The free Hamiltonian is removed entirely by the frame; only the shift
  // Hamiltonian and the resonant three-body term remain.
  const Operator abc = a * b * c.adjoint();
  Operator h = k.shift_ab * (na * nb) + k.v_eff * (abc + abc.adjoint());
  if (!p.compensate_shifts) h += k.shift_b * nb + k.shift_c * nc;
  const Operator local = p.nu * na + p.omega_b() * nb + p.omega_c() * nc;
  ModelSpec spec{space, h, local, local, {}, {}, {}, p.units};
  add_common_reservoirs(spec, p);

  Reservoir se{"se", {}, {}, 0.0, ""};
  const Operator ab = a * b;
  const Operator ad_b = a.adjoint() * b;
  for (const auto& ch : k.channels) {
    const double norm2 = ch.ab_amplitude * ch.ab_amplitude + ch.c_amplitude * ch.c_amplitude;
    if (norm2 > 0.0 && ch.collective_rate > 0.0) {
      const double s = 1.0 / std::sqrt(norm2);
      se.terms.push_back({ch.collective_rate * norm2, (ch.ab_amplitude * s) * ab +
                                                          (ch.c_amplitude * s) * c});
    }
    if (ch.anti_stokes_rate > 0.0) se.terms.push_back({ch.anti_stokes_rate, ad_b});
    if (ch.carrier_rate > 0.0) se.terms.push_back({ch.carrier_rate, b});
  }
  spec.reservoirs.push_back(std::move(se));
  spec.observables = {{"n_a", na}, {"n_b", nb}, {"n_c", nc}};
  return spec;
}

ModelSpec crossed_spec(const CrossedCavityParams& p) {
  return p.tier == CrossedTier::FullWithAtom ? crossed_full_spec(p) : crossed_effective_spec(p);
}

Model build_crossed_full(const CrossedCavityParams& p) { return assemble(crossed_full_spec(p)); }
Model build_crossed_effective(const CrossedCavityParams& p) {
  return assemble(crossed_effective_spec(p));
}
Model build_crossed(const CrossedCavityParams& p) { return assemble(crossed_spec(p)); }

}  // namespace qarsim
