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

#include <span>

#include "qarsim/crossed_cavity.hpp"
#include "qarsim/lindblad.hpp"

namespace qarsim {

// (2Γ + 4i(Ω−ε)) / (Γ² + 4(Ω−ε)²). Twice the real part is a dissipative rate
// per unit coupling², the imaginary part a level shift.
cplx spectral_correlation(double omega, double epsilon, double gamma);

struct EffectiveCoupling {
  double k_full;   // Σ g̃_b g̃_c η Δ/(Γ²/4 + Δ²)
  double k_limit;  // Σ g̃_b g̃_c η / Δ
};

EffectiveCoupling effective_coupling(const CrossedCavityParams& p);

struct PhononDecayModel {
  double gamma_cool = 1.0;
  double lambda = 0.0;
  double n0 = 0.0;

  double n_inf() const { return lambda / gamma_cool; }
};

// n_∞ + e^{−γt}(n₀ − n_∞)
double phonon_trajectory(const PhononDecayModel& model, double t);

// 2k²n_b/(κ_b + κ_c), with n_b the stationary photon number of cavity b.
double cooling_rate(double k, double nbar_b, double kappa_b, double kappa_c);
double cooling_rate(const CrossedCavityParams& p);

// −i[νa†a, ·] + (λ+γ)D[a] + λD[a†] on a single truncated phonon mode.
Superoperator appendix_b_generator(double nu, double lambda, double gamma_cool, int d_phonon);
Superoperator appendix_b_generator(const CrossedCavityParams& p);

struct RelaxationFit {
  double gamma;
  double n_inf;
  double n0;
  double rms;
};

// Least-squares fit of n(t) = n_∞ + e^{−γt}(n₀ − n_∞): linear in (n_∞, n₀),
// one-dimensional search in log γ.
RelaxationFit fit_relaxation(std::span<const double> t, std::span<const double> n);

}  // namespace qarsim
