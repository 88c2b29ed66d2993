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

#include <vector>

#include "qarsim/model.hpp"

namespace qarsim {

enum class QuadratureRule {
  Trapezoid,
  // Trapezoid with fourth-order Gregory end corrections on the same nodes.
  Gregory,
};

struct QuadratureNode {
  double u;
  double weight;  // includes the dipole pattern Π(u) = 3(1+u²)/8
};

// Evenly spaced nodes on u ∈ [−1, 1] for ∫Π(u)(·)du.
std::vector<QuadratureNode> recoil_quadrature(int points, QuadratureRule rule);

// Γ(1+n̄)∫Π(u)D[e^{iηu(a+a†)}σ⁻]du + Γn̄∫Π(u)D[e^{−iηu(a+a†)}σ⁺]du as one family.
Reservoir recoil_reservoir(const SpacePtr& space, const char* phonon, const char* atom,
                           double gamma, double nbar_sigma, double eta, int points,
                           QuadratureRule rule, double quantum);

// (1+n̄)·rate·D[x] + n̄·rate·D[x†] scaled as in the two-sided thermal drive:
// decay 2κ(1+n̄), gain 2κn̄.
Reservoir thermal_cavity_reservoir(const SpacePtr& space, const char* mode, double kappa,
                                   double nbar, double quantum);

// λ(1+n̄_a⁻¹)D[a] + λD[a†]
Reservoir phonon_heating_reservoir(const SpacePtr& space, const char* mode, double lambda,
                                   double nbar_a_inv, double quantum);

enum class SingleCavityTier { FullSine, LdaRwa, ThreeBody };

const char* to_string(SingleCavityTier tier);

struct SingleCavityParams {
  double nu = 1.0;
  double epsilon = 10.0;
  double g = 0.0;
  double eta = 0.05;
  double lambda = 0.0;
  double kappa = 0.0;
  double nbar_b = 0.0;
  double nbar_a_inv = 0.0;
  double nbar_sigma = 0.0;
  double gamma_sp = 0.0;
  int quadrature_points = 100;
  QuadratureRule quadrature = QuadratureRule::Gregory;
  int d_phonon = 21;
  int d_photon = 4;
  SingleCavityTier tier = SingleCavityTier::LdaRwa;
  Units units = Units::si();

  // Cavity resonant with the red sideband.
  double omega() const { return epsilon - nu; }
  void validate() const;
};

ModelSpec single_cavity_spec(const SingleCavityParams& p);
Model build_single_cavity(const SingleCavityParams& p);

}  // namespace qarsim
