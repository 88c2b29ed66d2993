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

#include <random>

#include "doctest.h"
#include "qarsim/lindblad.hpp"
#include "qarsim/solvers.hpp"

using namespace qarsim;

namespace {

DenseMat basis(int d, int i, int j) {
  DenseMat m = DenseMat::Zero(d, d);
  m(i, j) = 1.0;
  return m;
}

DenseMat random_dense(int d, std::mt19937& rng) {
  std::normal_distribution<double> n;
  DenseMat m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = cplx(n(rng), n(rng));
  return m;
}

// Direct Lindblad action, written without the library.
DenseMat lindblad_oracle(const DenseMat& h, const std::vector<std::pair<double, DenseMat>>& jumps,
                         const DenseMat& rho) {
  const cplx i(0, 1);
  DenseMat out = -i * (h * rho - rho * h);
  for (const auto& [r, l] : jumps) {
    const DenseMat ll = l.adjoint() * l;
    out += r * (l * rho * l.adjoint() - 0.5 * (ll * rho + rho * ll));
  }
  return out;
}

}  // namespace

TEST_SUITE("lindblad") {

TEST_CASE("column-stacking convention") {
  const DenseMat half = 0.5 * DenseMat::Identity(2, 2);
  const Vec v = vectorize(half);
  CHECK(v(0) == cplx(0.5));
  CHECK(v(1) == cplx(0.0));
  CHECK(v(2) == cplx(0.0));
  CHECK(v(3) == cplx(0.5));
  const Vec e01 = vectorize(basis(2, 0, 1));
  CHECK(e01(2) == cplx(1.0));
  CHECK(e01.cwiseAbs().sum() == 1.0);
  std::mt19937 rng(1);
  const DenseMat x = random_dense(5, rng);
  CHECK((devectorize(vectorize(x)) - x).norm() == 0.0);
  CHECK_THROWS(devectorize(Vec::Zero(5)));
}

TEST_CASE("Hamiltonian superoperator") {
  auto s = CompositeSpace::make({SubsystemSpec::boson("a", 2)});
  const double nu = 1.3;
  const Superoperator hs = hamiltonian_superoperator(nu * number_operator(s, "a"));
  CHECK(hs.apply(basis(2, 1, 1)).norm() == 0.0);
  CHECK(hs.apply(basis(2, 0, 0) * 0.3 + basis(2, 1, 1) * 0.7).norm() == 0.0);
  // −i(Hρ − ρH) for ρ = |0⟩⟨1| is +iν|0⟩⟨1|
  const DenseMat got = hs.apply(basis(2, 0, 1));
  CHECK(std::abs(got(0, 1) - cplx(0, nu)) < 1e-15);
  CHECK(std::abs(got(1, 0)) == 0.0);
  CHECK_THROWS(hamiltonian_superoperator(annihilation(s, "a")));
}

TEST_CASE("dissipator action by hand") {
  auto q = CompositeSpace::make({SubsystemSpec::two_level("s")});
  const DissipatorTerm decay{1.0, sigma_minus(q, "s")};
  const DenseMat up = basis(2, 1, 1), down = basis(2, 0, 0);
  CHECK((dissipator_superoperator(decay).apply(up) - (down - up)).norm() < 1e-15);
  CHECK(dissipator_superoperator(decay).apply(down).norm() == 0.0);
  CHECK((apply_dissipator(decay, up) - (down - up)).norm() < 1e-15);

  auto b = CompositeSpace::make({SubsystemSpec::boson("a", 3)});
  const DissipatorTerm loss{1.0, annihilation(b, "a")};
  const DenseMat expect = 2.0 * basis(3, 1, 1) - 2.0 * basis(3, 2, 2);
  CHECK((dissipator_superoperator(loss).apply(basis(3, 2, 2)) - expect).norm() < 1e-14);
}

TEST_CASE("composition") {
  auto s = CompositeSpace::make({SubsystemSpec::two_level("s")});
  CHECK(compose(s, {}).max_abs() == 0.0);
  const Superoperator d = dissipator_superoperator({0.4, sigma_minus(s, "s")});
  std::vector<Superoperator> one{d};
  CHECK((compose(s, one).matrix() - d.matrix()).norm() == 0.0);
}

TEST_CASE("damped two-level system relaxes to the ground state") {
  auto s = CompositeSpace::make({SubsystemSpec::two_level("s")});
  const Operator h = 0.8 * excited_projector(s, "s");
  const std::vector<DissipatorTerm> terms{{0.3, sigma_minus(s, "s")}};
  const Superoperator gen = lindblad_generator(h, terms);
  const auto res = steady_state(gen);
  CHECK(std::abs(res.rho(0, 0) - cplx(1.0)) < 1e-14);
  CHECK(std::abs(res.rho(1, 1)) < 1e-14);
  CHECK(res.residual < 1e-12);
}

TEST_CASE("assembled generator matches a direct evaluation") {
  std::mt19937 rng(3);
  auto s = CompositeSpace::make({SubsystemSpec::boson("a", 4), SubsystemSpec::boson("b", 3),
                                 SubsystemSpec::two_level("s")});
  const Operator a = annihilation(s, "a"), b = annihilation(s, "b");
  const Operator sm = sigma_minus(s, "s");
  const Operator hop = a * b * sm.adjoint();
  const Operator h = 1.1 * number_operator(s, "a") - 0.4 * excited_projector(s, "s") +
                     0.37 * (hop + hop.adjoint());
  const std::vector<DissipatorTerm> terms{{0.2, a}, {0.05, a.adjoint()}, {0.7, sm}, {0.3, a * b}};
  // A quadrature-like family: several jumps with distinct weights.
  std::vector<DissipatorTerm> fam;
  for (int k = 0; k < 4; ++k)
    fam.push_back({0.1 * (k + 1), (0.3 * k) * a + sm + cplx(0, 0.2 * k) * b.adjoint()});
  const std::vector<std::vector<DissipatorTerm>> families{fam};
  const Superoperator gen = lindblad_generator(h, terms, families);

  std::vector<std::pair<double, DenseMat>> jumps;
  for (const auto& t : terms) jumps.emplace_back(t.rate, t.jump.dense());
  for (const auto& t : fam) jumps.emplace_back(t.rate, t.jump.dense());
  for (int trial = 0; trial < 3; ++trial) {
    const DenseMat rho = random_dense(s->dim(), rng);
    const DenseMat want = lindblad_oracle(h.dense(), jumps, rho);
    CHECK((gen.apply(rho) - want).norm() < 1e-12 * want.norm());
  }
  CHECK(trace_preservation_defect(gen) < 1e-14);
  CHECK(estimate_generator_nonzeros(h, terms, families) >= gen.matrix().nonZeros());
}

TEST_CASE("generators preserve trace and Hermiticity") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto s = CompositeSpace::make({SubsystemSpec::boson("a", 5), SubsystemSpec::two_level("s")});
  for (int trial = 0; trial < 10; ++trial) {
    const Operator a = annihilation(s, "a"), sm = sigma_minus(s, "s");
    const Operator coupling = a * sm.adjoint();
    const Operator h = u(rng) * number_operator(s, "a") + u(rng) * (coupling + coupling.adjoint());
    const std::vector<DissipatorTerm> terms{{u(rng), a}, {u(rng), a.adjoint()}, {u(rng), sm},
                                            {u(rng), a + cplx(u(rng), u(rng)) * sm}};
    const Superoperator gen = lindblad_generator(h, terms);
    DenseMat rho = random_dense(s->dim(), rng);
    rho = rho * rho.adjoint();
    const DenseMat out = gen.apply(rho);
    CHECK(std::abs(out.trace()) < 1e-12 * out.norm());
    CHECK((out - out.adjoint()).norm() < 1e-12 * out.norm());
  }
}

}  // TEST_SUITE
