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
#include <vector>

#include "doctest.h"
#include "qarsim/analytics.hpp"
#include "qarsim/crossed_cavity.hpp"
#include "qarsim/solvers.hpp"
#include "qarsim/thermo.hpp"

using namespace qarsim;

namespace {

SpacePtr qubit() { return CompositeSpace::make({SubsystemSpec::two_level("q")}); }
SpacePtr mode(int d) { return CompositeSpace::make({SubsystemSpec::boson("m", d)}); }

// γ↓ D[σ⁻] + γ↑ D[σ⁺] + ν/2 σz-like splitting.
Superoperator damped_qubit(double down, double up, double split = 1.0) {
  auto s = qubit();
  const Operator h = split * excited_projector(s, "q");
  std::vector<DissipatorTerm> t{{down, sigma_minus(s, "q")}, {up, sigma_plus(s, "q")}};
  return lindblad_generator(h, t);
}

// κ(1+n̄)D[a] + κn̄D[a†] on a truncated oscillator.
Superoperator thermal_mode(int d, double nbar, double kappa = 1.0) {
  auto s = mode(d);
  const Operator a = annihilation(s, "m");
  std::vector<DissipatorTerm> t{{kappa * (1.0 + nbar), a}, {kappa * nbar, a.adjoint()}};
  return lindblad_generator(number_operator(s, "m"), t);
}

// Independent oracle: mean of a geometric distribution cut at d levels.
double truncated_geometric_mean(double nbar, int d) {
  const double q = nbar / (1.0 + nbar);
  double z = 0.0, m = 0.0;
  for (int n = 0; n < d; ++n) {
    z += std::pow(q, n);
    m += n * std::pow(q, n);
  }
  return m / z;
}

CrossedCavityParams cooling_point() {
  CrossedCavityParams p;
  p.units = Units::natural();
  p.tier = CrossedTier::EffectiveLargeDelta;
  p.nu = 1.0;
  p.epsilon = 200.0;
  p.detuning = 40.0;
  p.kappa_b = p.kappa_c = 0.02;
  // k = g²η/Δ = κ/20
  p.g_b = p.g_c = std::sqrt(p.kappa_b / 20.0 * p.detuning / 0.05);
  p.eta = 0.05;
  p.gamma_sp = 2.0;
  p.lambda = 1e-5;
  p.t_hot = 100.0;
  p.t_room = 20.0;
  p.d_phonon = 6;
  p.d_photon_b = 3;
  p.d_photon_c = 2;
  return p;
}

}  // namespace

TEST_SUITE("solvers") {

TEST_CASE("damped qubit steady state") {
  const auto gen = damped_qubit(1.0, 0.0);
  const auto res = steady_state(gen);
  CHECK(res.residual < 1e-12);
  CHECK(std::abs(res.rho(0, 0) - cplx(1.0)) < 1e-14);
  CHECK(res.trace_defect < 1e-14);

  const auto warm = steady_state(damped_qubit(1.0, 0.25));
  CHECK(warm.rho(1, 1).real() == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(std::abs(warm.rho(0, 1)) < 1e-14);
}

TEST_CASE("thermal oscillator steady state") {
  const auto res25 = steady_state(thermal_mode(25, 0.5));
  const auto s25 = mode(25);
  const double n25 = expectation(res25.rho, number_operator(s25, "m")).real();
  CHECK(std::abs(n25 - 0.5) < 1e-8);
  // d = 15 carries a truncation bias of order d·q^d; compare with the cut oracle.
  const auto res15 = steady_state(thermal_mode(15, 0.5));
  const double n15 = expectation(res15.rho, number_operator(mode(15), "m")).real();
  CHECK(n15 == doctest::Approx(truncated_geometric_mean(0.5, 15)).epsilon(1e-12));
  CHECK(std::abs(n15 - 0.5) < 2e-6);
}

TEST_CASE("all steady-state methods agree") {
  auto s = CompositeSpace::make({SubsystemSpec::boson("a", 4), SubsystemSpec::two_level("q")});
  const Operator a = annihilation(s, "a");
  const Operator h = 0.7 * number_operator(s, "a") + 0.3 * (a * sigma_plus(s, "q") +
                                                           a.adjoint() * sigma_minus(s, "q"));
  std::vector<DissipatorTerm> t{{0.4, a}, {0.1, a.adjoint()}, {0.5, sigma_minus(s, "q")}};
  const auto gen = lindblad_generator(h, t);
  SteadyStateOptions o;
  o.method = SteadyMethod::DenseEigen;
  const DenseMat ref = steady_state(gen, o).rho;
  for (auto m : {SteadyMethod::Auto, SteadyMethod::SparseLu, SteadyMethod::DenseLu,
                 SteadyMethod::InverseIteration}) {
    o.method = m;
    const auto r = steady_state(gen, o);
    INFO(to_string(m));
    CHECK(trace_distance(r.rho, ref) < 1e-10);
    CHECK(r.relative_residual < 1e-12);
  }
  o.method = SteadyMethod::DenseLu;
  o.reduce_sectors = false;
  CHECK(trace_distance(steady_state(gen, o).rho, ref) < 1e-10);
}

TEST_CASE("sector reduction on an excitation-conserving model") {
  auto s = CompositeSpace::make({SubsystemSpec::boson("a", 3), SubsystemSpec::boson("b", 3)});
  const Operator a = annihilation(s, "a");
  const Operator b = annihilation(s, "b");
  const Operator h = 0.2 * (a * b.adjoint() + a.adjoint() * b);
  std::vector<DissipatorTerm> t{{1.0, a}, {0.3, b}};
  const auto gen = lindblad_generator(h, t);
  const auto part = structural_sectors(gen);
  // Coherences between different total excitation numbers never mix with populations.
  CHECK(part.count > 1);
  const auto res = steady_state(gen);
  CHECK(res.reduced_size < 81);
  CHECK(std::abs(res.rho(0, 0) - cplx(1.0)) < 1e-12);
}

TEST_CASE("positivity and trace-preservation failures") {
  auto s = qubit();
  const auto down = dissipator_superoperator({1.0, sigma_minus(s, "q")}).matrix();
  const auto up = dissipator_superoperator({1.0, sigma_plus(s, "q")}).matrix();
  const SparseMat bad = (down - 0.5 * up).pruned();
  try {
    steady_state(Superoperator(s, bad));
    FAIL("expected a positivity failure");
  } catch (const SolverError& e) {
    CHECK(e.kind() == SolverFailure::Positivity);
  }
  SparseMat leak(4, 4);
  leak.setIdentity();
  leak *= cplx(-1.0);
  try {
    steady_state(Superoperator(s, leak));
    FAIL("expected a trace-preservation failure");
  } catch (const SolverError& e) {
    CHECK(e.kind() == SolverFailure::NotTracePreserving);
  }
}

TEST_CASE("memory budget is enforced before factorization") {
  SteadyStateOptions o;
  o.memory_budget_bytes = 1e3;
  CHECK_THROWS_AS(steady_state(thermal_mode(20, 0.5), o), MemoryBudgetError);
}

TEST_CASE("unitary evolution rotates the coherence") {
  auto s = mode(2);
  const double nu = 1.3;
  const auto gen = lindblad_generator(nu * number_operator(s, "m"), {});
  DenseMat rho0 = DenseMat::Constant(2, 2, cplx(0.5));
  std::vector<double> grid{0.0, 0.4, 1.1, 2.5, 7.0};
  EvolveOptions o;
  o.store_states = true;
  o.rtol = 1e-11;
  o.atol = 1e-13;
  const auto tr = evolve(gen, rho0, grid, {}, o);
  REQUIRE(tr.states.size() == grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    // ρ₀₁(t) = ⟨0|e^{−iHt}ρe^{iHt}|1⟩ = e^{iνt}ρ₀₁(0) with E₁ − E₀ = ν.
    const cplx expect = 0.5 * std::exp(cplx(0.0, nu * grid[k]));
    CHECK(std::abs(tr.states[k](0, 1) - expect) < 1e-8);
    CHECK(std::abs(tr.states[k](0, 1)) == doctest::Approx(0.5).epsilon(1e-9));
  }
}

TEST_CASE("heating only: linear growth") {
  auto s = mode(30);
  const Operator a = annihilation(s, "m");
  const double lambda = 0.01;
  std::vector<DissipatorTerm> t{{lambda, a}, {lambda, a.adjoint()}};
  const auto gen = lindblad_generator(number_operator(s, "m"), t);
  DenseMat rho0 = DenseMat::Zero(30, 30);
  rho0(1, 1) = 1.0;
  std::vector<double> grid;
  for (int k = 0; k <= 8; ++k) grid.push_back(12.5 * k);
  std::vector<NamedOperator> obs{{"n", number_operator(s, "m")}};
  const auto tr = evolve(gen, rho0, grid, obs);
  for (std::size_t k = 0; k < grid.size(); ++k)
    CHECK(tr.tracks.at("n")[k] == doctest::Approx(1.0 + lambda * grid[k]).epsilon(1e-6));
  CHECK(tr.max_trace_drift < 1e-9);
}

TEST_CASE("exponential relaxation is fitted back") {
  const PhononDecayModel m{0.02, 0.01, 4.0};
  const auto gen = appendix_b_generator(1.0, m.lambda, m.gamma_cool, 80);
  auto s = gen.space_ptr();
  const double n0 = m.n0;
  const double q = n0 / (1.0 + n0);
  DenseMat rho0 = DenseMat::Zero(80, 80);
  for (int n = 0; n < 80; ++n) rho0(n, n) = (1.0 - q) * std::pow(q, n);
  rho0 /= rho0.trace();
  std::vector<double> grid;
  for (int k = 0; k <= 60; ++k) grid.push_back(5.0 * k);
  const auto* label = s->factors()[0].label.c_str();
  std::vector<NamedOperator> obs{{"n", number_operator(s, label)}};
  const auto tr = evolve(gen, rho0, grid, obs);
  const auto fit = fit_relaxation(tr.times, tr.tracks.at("n"));
  CHECK(fit.gamma == doctest::Approx(m.gamma_cool).epsilon(0.15));
  CHECK(fit.n_inf == doctest::Approx(m.n_inf()).epsilon(0.15));
  // The Gaussian-state oracle is exact for this generator.
  for (std::size_t k = 0; k < grid.size(); k += 10)
    CHECK(tr.tracks.at("n")[k] == doctest::Approx(phonon_trajectory(m, grid[k])).epsilon(1e-4));
}

TEST_CASE("expectation values") {
  auto s = mode(6);
  DenseMat rho = DenseMat::Zero(6, 6);
  rho(2, 2) = 0.75;
  rho(4, 4) = 0.25;
  CHECK(expectation(rho, identity(s)).real() == doctest::Approx(1.0));
  CHECK(expectation(rho, number_operator(s, "m")).real() == doctest::Approx(2.5));
  const Operator a = annihilation(s, "m");
  CHECK(expectation(rho, a.adjoint() * a * a.adjoint() * a).real() == doctest::Approx(7.0));
  CHECK(std::abs(expectation(rho, a)) == 0.0);
}

TEST_CASE("heat current vanishes at detailed balance") {
  const double nbar = 0.4;
  auto s = mode(12);
  const auto res = steady_state(thermal_mode(12, nbar));
  const Operator a = annihilation(s, "m");
  std::vector<DissipatorTerm> t{{1.0 + nbar, a}, {nbar, a.adjoint()}};
  const auto hc = heat_current(res.rho, number_operator(s, "m"), t);
  CHECK(std::abs(hc.value) < 1e-12);
  CHECK(std::abs(hc.imag) < 1e-12);
}

TEST_CASE("energy ledger closes on stationary states") {
  auto p = cooling_point();
  for (auto tier : {CrossedTier::EffectiveLargeDelta, CrossedTier::EffectiveFull,
                    CrossedTier::FullWithAtom}) {
    p.tier = tier;
    p.delta_b = tier == CrossedTier::EffectiveFull ? 0.2 : 0.0;
    p.quadrature_points = 8;
    const Model m = build_crossed(p);
    const auto res = steady_state(m.generator);
    const auto flows = reservoir_flows(m, res.rho);
    INFO(to_string(tier));
    CHECK(first_law_residual(flows) <= 1e-6);
  }
}

TEST_CASE("refrigerator COP approaches nu / omega_b") {
  const auto p = cooling_point();
  const Model m = build_crossed(p);
  const auto res = steady_state(m.generator);
  const auto flows = reservoir_flows(m, res.rho);
  double qa = 0.0, qb = 0.0;
  for (const auto& f : flows) {
    if (f.name == "a") qa = f.power;
    if (f.name == "b") qb = f.power;
  }
  REQUIRE(qb > 0.0);
  MESSAGE("COP " << qa / qb << " vs " << p.nu / p.omega_b());
  CHECK(qa / qb == doctest::Approx(p.nu / p.omega_b()).epsilon(0.10));
}

TEST_CASE("trace distance") {
  DenseMat a = DenseMat::Zero(2, 2), b = DenseMat::Zero(2, 2);
  a(0, 0) = 1.0;
  b(1, 1) = 1.0;
  CHECK(trace_distance(a, b) == doctest::Approx(1.0));
  CHECK(trace_distance(a, a) == 0.0);
}

}  // TEST_SUITE
