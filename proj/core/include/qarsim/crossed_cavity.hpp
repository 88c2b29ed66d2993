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

#include <optional>
#include <vector>

#include "qarsim/model.hpp"
#include "qarsim/single_cavity.hpp"

namespace qarsim {

enum class CrossedTier { FullWithAtom, EffectiveFull, EffectiveLargeDelta };
enum class CavityDrive {
  // κ_b(2+n̄_b)D[b] + κ_b n̄_b D[b†]: thermal light enters through one mirror.
  OneSided,
  // 2κ_b(1+n̄_b)D[b] + 2κ_b n̄_b D[b†]
  TwoSided,
};

const char* to_string(CrossedTier tier);
const char* to_string(CavityDrive drive);

struct IonCoupling {
  double g_b = 0.0;
  double g_c = 0.0;
  double eta = 0.0;  // signed mode participation
  double delta_b = 0.0;
  double delta_c = 0.0;
  double detuning = 0.0;  // Δ_j = ω_c − ε_j

  double g_tilde_b() const;
  double g_tilde_c() const;
  double h_b() const;
};

struct IonArrayParams {
  std::vector<IonCoupling> ions;
};

struct CrossedCavityParams {
  double nu = 1.0;
  double epsilon = 100.0;
  double detuning = 10.0;  // Δ = ω_c − ε
  double g_b = 0.0;
  double g_c = 0.0;
  double eta = 0.05;
  double delta_b = 0.0;
  double delta_c = 0.0;
  double kappa_b = 0.0;
  double kappa_c = 0.0;
  double lambda = 0.0;
  double gamma_sp = 1.0;
  double t_hot = 1.0;
  double t_room = 1.0;
  // Defaults to 1/n̄(ν, T_r).
  std::optional<double> nbar_a_inv;
  double nbar_sigma = 0.0;
  int d_phonon = 6;
  int d_photon_b = 3;
  int d_photon_c = 3;
  CrossedTier tier = CrossedTier::EffectiveFull;
  CavityDrive drive_b = CavityDrive::OneSided;
  // Pull the bare cavity frequencies by the single-photon Lamb shifts so the
  // dressed levels, not the bare ones, meet the three-body resonance.
  bool compensate_shifts = false;
  int quadrature_points = 100;
  QuadratureRule quadrature = QuadratureRule::Gregory;
  // Non-empty: replaces the single-ion coupling scalars (effective tiers only).
  std::vector<IonCoupling> ions;
  Units units = Units::si();

  double omega_c() const { return epsilon + detuning; }
  // Two-photon resonance with the red sideband.
  double omega_b() const { return omega_c() - nu; }
  double g_tilde_b() const;
  double g_tilde_c() const;
  double h_b() const;
  double nbar_b() const;
  double nbar_c() const;
  double resolved_nbar_a_inv() const;
  // Stationary photon number of the uncoupled hot cavity.
  double cavity_b_occupation() const;
  std::vector<IonCoupling> ion_list() const;
  void validate() const;
};

// Per-ion Lorentzian coefficients of the eliminated model.
struct IonChannels {
  double collective_rate;  // multiplies D[g̃_bη·ab + g̃_c·c]
  double ab_amplitude;     // g̃_bη
  double c_amplitude;      // g̃_c
  double anti_stokes_rate;  // D[a†b]
  double carrier_rate;      // D[b]
};

struct EffectiveCoefficients {
  double shift_ab = 0.0;  // a†a b†b
  double shift_b = 0.0;   // b†b
  double shift_c = 0.0;   // c†c
  double v_eff = 0.0;     // abc† + a†b†c
  std::vector<IonChannels> channels;

  // Largest |coefficient| in the shift Hamiltonian.
  double max_shift() const;
};

EffectiveCoefficients effective_coefficients(const CrossedCavityParams& p);

ModelSpec crossed_full_spec(const CrossedCavityParams& p);
ModelSpec crossed_effective_spec(const CrossedCavityParams& p);
// Dispatches on p.tier.
ModelSpec crossed_spec(const CrossedCavityParams& p);

Model build_crossed_full(const CrossedCavityParams& p);
Model build_crossed_effective(const CrossedCavityParams& p);
Model build_crossed(const CrossedCavityParams& p);

// Σ_j g̃_b,j g̃_c,j η_j / Δ_j
double collective_coupling(const IonArrayParams& ions);

// δ = d·ω/c₀
double misalignment_phase(double distance_m, double omega);

struct RegimeThresholds {
  double much_less = 0.1;
  double lesssim = 1.0;
};

struct RegimeCondition {
  std::string name;
  std::string description;
  double ratio;
  double threshold;
  bool pass;
};

struct RegimeReport {
  std::vector<RegimeCondition> conditions;
  double k = 0.0;
  double delta_e = 0.0;
  bool all_pass() const;
  double worst_margin() const;  // max ratio/threshold
};

RegimeReport regime_diagnostics(const CrossedCavityParams& p, const RegimeThresholds& t = {});

}  // namespace qarsim
