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

#include <unsupported/Eigen/KroneckerProduct>

#include "doctest.h"
#include "qarsim/hilbert.hpp"

using namespace qarsim;

namespace {

DenseMat ladder(int d) {
  DenseMat m = DenseMat::Zero(d, d);
  for (int n = 1; n < d; ++n) m(n - 1, n) = std::sqrt(static_cast<double>(n));
  return m;
}

Operator random_operator(const SpacePtr& s, std::mt19937& rng, double fill = 0.3) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::bernoulli_distribution keep(fill);
  const int d = s->dim();
  SparseMat m(d, d);
  std::vector<Triplet> t;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      if (keep(rng)) t.emplace_back(i, j, cplx(u(rng), u(rng)));
  m.setFromTriplets(t.begin(), t.end());
  return Operator(s, m);
}

}  // namespace

TEST_SUITE("hilbert") {

TEST_CASE("annihilation on a single factor") {
  auto s2 = CompositeSpace::make({SubsystemSpec::boson("a", 2)});
  DenseMat a2 = annihilation(s2, "a").dense();
  CHECK(a2(0, 1) == cplx(1.0));
  CHECK(a2.cwiseAbs().sum() == doctest::Approx(1.0));

  auto s3 = CompositeSpace::make({SubsystemSpec::boson("a", 3)});
  const Operator a3op = annihilation(s3, "a");
  const SparseMat& a3 = a3op.matrix();
  CHECK(a3.nonZeros() == 2);
  CHECK(a3.coeff(0, 1) == cplx(1.0));
  CHECK(a3.coeff(1, 2).real() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("embedding follows the Kronecker order of the factor list") {
  auto s = CompositeSpace::make({SubsystemSpec::boson("a", 3), SubsystemSpec::two_level("s")});
  const DenseMat expect = Eigen::kroneckerProduct(ladder(3), DenseMat::Identity(2, 2)).eval();
  const DenseMat got = annihilation(s, "a").dense();
  REQUIRE(got.rows() == 6);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) CHECK(std::abs(got(i, j) - expect(i, j)) < 1e-15);
  // σ⁻ on the second (fastest) factor
  const DenseMat sm = sigma_minus(s, "s").dense();
  DenseMat sm_local = DenseMat::Zero(2, 2);
  sm_local(0, 1) = 1.0;
  CHECK((sm - Eigen::kroneckerProduct(DenseMat::Identity(3, 3), sm_local).eval()).norm() == 0.0);
}

TEST_CASE("two-level operators") {
  auto s = CompositeSpace::make({SubsystemSpec::two_level("s")});
  const Operator sm = sigma_minus(s, "s");
  CHECK(sm.dense()(0, 1) == cplx(1.0));
  CHECK(sm.matrix().nonZeros() == 1);
  const DenseMat proj = (sm.adjoint() * sm).dense();
  CHECK(proj(1, 1) == cplx(1.0));
  CHECK(std::abs(proj(0, 0)) == 0.0);
  CHECK((excited_projector(s, "s").dense() - proj).norm() == 0.0);
  CHECK((anticommutator(sm, sigma_plus(s, "s")).dense() - DenseMat::Identity(2, 2)).norm() == 0.0);
}

TEST_CASE("number operator is exact on every retained level") {
  auto s = CompositeSpace::make({SubsystemSpec::boson("a", 4)});
  const DenseMat n = number_operator(s, "a").dense();
  for (int k = 0; k < 4; ++k) CHECK(n(k, k).real() == doctest::Approx(k));
  CHECK(n.trace().real() == doctest::Approx(6.0));
  const DenseMat ada = ladder(4).adjoint() * ladder(4);
  CHECK((n - ada).norm() < 1e-14);
  CHECK(ada(3, 3).real() == doctest::Approx(3.0));
}

TEST_CASE("position exponential") {
  auto s = CompositeSpace::make({SubsystemSpec::boson("a", 5)});
  CHECK((position_exponential(s, "a", 0.0).op.dense() - DenseMat::Identity(5, 5)).norm() < 1e-15);

  const double x = 0.7;
  const DenseMat u2 = local_position_exponential(2, x);
  CHECK(std::abs(u2(0, 0) - cplx(std::cos(x), 0)) < 1e-14);
  CHECK(std::abs(u2(0, 1) - cplx(0, std::sin(x))) < 1e-14);
  CHECK(std::abs(u2(1, 0) - cplx(0, std::sin(x))) < 1e-14);
  CHECK(std::abs(u2(1, 1) - cplx(std::cos(x), 0)) < 1e-14);

  // Independent oracle: eigendecomposition of the truncated position operator.
  const int d = 21;
  const double eta = 0.041;
  DenseMat xop = ladder(d) + ladder(d).adjoint();
  Eigen::SelfAdjointEigenSolver<DenseMat> es(xop);
  const Eigen::VectorXcd phase =
      (cplx(0, eta) * es.eigenvalues().cast<cplx>()).array().exp().matrix();
  const DenseMat oracle = es.eigenvectors() * phase.asDiagonal() * es.eigenvectors().adjoint();
  CHECK((local_position_exponential(d, eta) - oracle).norm() < 1e-12);

  auto s21 = CompositeSpace::make({SubsystemSpec::boson("a", d)});
  const auto pe = position_exponential(s21, "a", eta);
  // The truncated x is Hermitian, so U is unitary up to roundoff.
  CHECK(pe.unitarity_defect < 1e-13);
  MESSAGE("unitarity defect at d=21, eta=0.041: " << pe.unitarity_defect);
}

TEST_CASE("commutator of ladder operators shows the truncation edge") {
  auto s = CompositeSpace::make({SubsystemSpec::boson("a", 5)});
  const DenseMat c = commutator(annihilation(s, "a"), creation(s, "a")).dense();
  for (int k = 0; k < 4; ++k) CHECK(c(k, k).real() == doctest::Approx(1.0));
  CHECK(c(4, 4).real() == doctest::Approx(-4.0));
  CHECK((c - DenseMat(c.diagonal().asDiagonal())).norm() < 1e-14);
}

TEST_CASE("adjoint is an anti-homomorphic involution") {
  std::mt19937 rng(7);
  auto s = CompositeSpace::make({SubsystemSpec::boson("a", 3), SubsystemSpec::two_level("s")});
  for (int trial = 0; trial < 20; ++trial) {
    const Operator x = random_operator(s, rng);
    const Operator y = random_operator(s, rng);
    CHECK((x.adjoint().adjoint() - x).max_abs() == 0.0);
    CHECK(((x * y).adjoint() - y.adjoint() * x.adjoint()).max_abs() < 1e-14);
  }
}

TEST_CASE("space validation") {
  CHECK_THROWS(CompositeSpace({SubsystemSpec::boson("a", 3), SubsystemSpec::boson("a", 2)}));
  CHECK_THROWS(CompositeSpace({SubsystemSpec::boson("a", 1)}));
  auto s = CompositeSpace::make({SubsystemSpec::boson("a", 3)});
  auto t = CompositeSpace::make({SubsystemSpec::boson("a", 4)});
  CHECK_THROWS_AS(annihilation(s, "a") + annihilation(t, "a"), SpaceMismatchError);
  CHECK_THROWS(annihilation(s, "b"));
  CHECK_THROWS(sigma_minus(s, "a"));
}

}  // TEST_SUITE
