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

#include "qarsim/single_cavity.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qarsim {

std::vector<QuadratureNode> recoil_quadrature(int points, QuadratureRule rule) {
  if (points < 2) throw std::invalid_argument("recoil quadrature needs at least 2 points");
  const double h = 2.0 / (points - 1);
  std::vector<double> w(static_cast<std::size_t>(points), h);
  if (rule == QuadratureRule::Gregory && points >= 6) {
    static constexpr double ends[3] = {3.0 / 8.0, 7.0 / 6.0, 23.0 / 24.0};
    for (int k = 0; k < 3; ++k) {
      w[static_cast<std::size_t>(k)] = h * ends[k];
      w[static_cast<std::size_t>(points - 1 - k)] = h * ends[k];
    }
  } else {
    w.front() = w.back() = 0.5 * h;
  }
  std::vector<QuadratureNode> nodes;
  nodes.reserve(w.size());
  for (int k = 0; k < points; ++k) {
    const double u = -1.0 + h * k;
    nodes.push_back({u, w[static_cast<std::size_t>(k)] * 3.0 * (1.0 + u * u) / 8.0});
  }
  return nodes;
}

Reservoir recoil_reservoir(const SpacePtr& space, const char* phonon, const char* atom,
                           double gamma, double nbar_sigma, double eta, int points,
                           QuadratureRule rule, double quantum) {
  Reservoir r{"sigma", {}, {}, quantum, atom};
  if (gamma <= 0.0) return r;
  const Operator sm = sigma_minus(space, atom);
  const Operator sp = sigma_plus(space, atom);
  const auto nodes = recoil_quadrature(points, rule);
  if (eta == 0.0) {
    // Every node carries the same jump.
    double total = 0.0;
    for (const auto& node : nodes) total += node.weight;
    r.terms.push_back({gamma * (1.0 + nbar_sigma) * total, sm});
    if (nbar_sigma > 0.0) r.terms.push_back({gamma * nbar_sigma * total, sp});
    return r;
  }
  for (const auto& node : nodes) {
    const Operator u = position_exponential(space, phonon, eta * node.u).op;
    r.family.push_back({gamma * (1.0 + nbar_sigma) * node.weight, u * sm});
    if (nbar_sigma > 0.0) r.family.push_back({gamma * nbar_sigma * node.weight, u.adjoint() * sp});
  }
  return r;
}

Reservoir thermal_cavity_reservoir(const SpacePtr& space, const char* mode, double kappa,
                                   double nbar, double quantum) {
  Reservoir r{mode, {}, {}, quantum, mode};
  const Operator b = annihilation(space, mode);
  r.terms.push_back({2.0 * kappa * (1.0 + nbar), b});
  r.terms.push_back({2.0 * kappa * nbar, b.adjoint()});
  return r;
}

Reservoir phonon_heating_reservoir(const SpacePtr& space, const char* mode, double lambda,
                                   double nbar_a_inv, double quantum) {
  Reservoir r{mode, {}, {}, quantum, mode};
  const Operator a = annihilation(space, mode);
  r.terms.push_back({lambda * (1.0 + nbar_a_inv), a});
  r.terms.push_back({lambda, a.adjoint()});
  return r;
}

const char* to_string(SingleCavityTier tier) {
  switch (tier) {
    case SingleCavityTier::FullSine: return "full_sine";
    case SingleCavityTier::LdaRwa: return "lda_rwa";
    case SingleCavityTier::ThreeBody: return "three_body";
  }
  return "unknown";
}

void SingleCavityParams::validate() const {
  auto nonneg = [](double v, const char* name) {
    if (!(v >= 0.0) || !std::isfinite(v))
      throw std::invalid_argument(std::string("single cavity: ") + name +
                                  " must be finite and nonnegative");
  };
  if (!(nu > 0.0)) throw std::invalid_argument("single cavity: nu must be positive");
  if (!(omega() > 0.0)) throw std::invalid_argument("single cavity: epsilon must exceed nu");
  nonneg(g, "g");
  nonneg(lambda, "lambda");
  nonneg(kappa, "kappa");
  nonneg(nbar_b, "nbar_b");
  nonneg(nbar_a_inv, "nbar_a_inv");
  nonneg(nbar_sigma, "nbar_sigma");
  nonneg(gamma_sp, "gamma");
  if (!std::isfinite(eta)) throw std::invalid_argument("single cavity: eta must be finite");
  if (d_phonon < 2 || d_photon < 2)
    throw std::invalid_argument("single cavity: truncations must be >= 2");
  if (quadrature_points < 2)
    throw std::invalid_argument("single cavity: quadrature_points must be >= 2");
}

ModelSpec single_cavity_spec(const SingleCavityParams& p) {
  p.validate();
  auto space = CompositeSpace::make({SubsystemSpec::boson("a", p.d_phonon),
                                     SubsystemSpec::boson("b", p.d_photon),
                                     SubsystemSpec::two_level("sigma")});
  const Operator na = number_operator(space, "a");
  const Operator nb = number_operator(space, "b");
  const Operator pe = excited_projector(space, "sigma");
  const Operator a = annihilation(space, "a");
  const Operator b = annihilation(space, "b");
  const Operator sm = sigma_minus(space, "sigma");
  const Operator sp = sigma_plus(space, "sigma");

  // Frame ω(b†b + σ⁺σ⁻) leaves ν a†a + ν σ⁺σ⁻ and a static coupling.
  const Operator frame = p.omega() * (nb + pe);
  Operator h = p.nu * (na + pe);
  const Operator hop = b * sp + b.adjoint() * sm;
  switch (p.tier) {
    case SingleCavityTier::LdaRwa:
      h += (p.g * p.eta) * ((a + a.adjoint()) * hop);
      break;
    case SingleCavityTier::ThreeBody:
      h += (p.g * p.eta) * (a * b * sp + a.adjoint() * b.adjoint() * sm);
      break;
    case SingleCavityTier::FullSine: {
      // sin[η(a+a†)] = (U − U†)/2i, optical counter-rotating terms dropped.
      const DenseMat u = local_position_exponential(p.d_phonon, p.eta);
      const DenseMat s = (u - u.adjoint()) / cplx(0.0, 2.0);
      const DenseMat s_herm = 0.5 * (s + s.adjoint());
      h += p.g * (lift(space, "a", s_herm, 1e-20) * hop);
      break;
    }
  }

  ModelSpec spec{space, h, frame, p.nu * na + p.omega() * nb + p.epsilon * pe, {}, {}, {},
                 p.units};
  spec.reservoirs.push_back(phonon_heating_reservoir(space, "a", p.lambda, p.nbar_a_inv, p.nu));
  spec.reservoirs.push_back(thermal_cavity_reservoir(space, "b", p.kappa, p.nbar_b, p.omega()));
  spec.reservoirs.push_back(recoil_reservoir(space, "a", "sigma", p.gamma_sp, p.nbar_sigma, p.eta,
                                             p.quadrature_points, p.quadrature, p.epsilon));
  spec.observables = {{"n_a", na}, {"n_b", nb}, {"p_e", pe}};
  if (std::abs(p.eta) > 0.3)
    spec.warnings.push_back("eta above 0.3: Lamb-Dicke expansion is questionable");
  if (p.tier == SingleCavityTier::FullSine && p.eta == 0.0)
    spec.warnings.push_back("full_sine tier with eta = 0: interaction vanishes");
  return spec;
}

Model build_single_cavity(const SingleCavityParams& p) { return assemble(single_cavity_spec(p)); }

}  // namespace qarsim
