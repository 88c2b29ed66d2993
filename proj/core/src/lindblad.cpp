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

#include "qarsim/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace qarsim {

Superoperator::Superoperator(SpacePtr space, SparseMat matrix)
    : space_(std::move(space)), matrix_(std::move(matrix)) {
  const long long n = static_cast<long long>(space_->dim()) * space_->dim();
  if (matrix_.rows() != n || matrix_.cols() != n)
    throw std::invalid_argument("superoperator shape must be dim^2 x dim^2");
  matrix_.makeCompressed();
}

DenseMat Superoperator::apply(const DenseMat& rho) const {
  if (rho.rows() != dim() || rho.cols() != dim())
    throw SpaceMismatchError("superoperator applied to a matrix of the wrong size");
  return devectorize(matrix_ * vectorize(rho));
}

double Superoperator::max_abs() const {
  double m = 0.0;
  for (int k = 0; k < matrix_.nonZeros(); ++k) m = std::max(m, std::abs(matrix_.valuePtr()[k]));
  return m;
}

double Superoperator::norm1() const {
  double best = 0.0;
  for (int c = 0; c < matrix_.outerSize(); ++c) {
    double s = 0.0;
    for (SparseMat::InnerIterator it(matrix_, c); it; ++it) s += std::abs(it.value());
    best = std::max(best, s);
  }
  return best;
}

Superoperator& Superoperator::operator+=(const Superoperator& rhs) {
  require_same_space(*space_, *rhs.space_, "superoperator+");
  matrix_ += rhs.matrix_;
  return *this;
}

Vec vectorize(const DenseMat& rho) {
  if (rho.rows() != rho.cols()) throw std::invalid_argument("vectorize: matrix is not square");
  return Eigen::Map<const Vec>(rho.data(), rho.size());
}

DenseMat devectorize(const Vec& v) {
  const auto n = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(v.size()))));
  if (n * n != v.size()) throw std::invalid_argument("devectorize: length is not a square");
  return Eigen::Map<const DenseMat>(v.data(), n, n);
}

namespace {

void check_term(const DissipatorTerm& t, const CompositeSpace& space) {
  if (!(t.rate >= 0.0) || !std::isfinite(t.rate))
    throw std::invalid_argument("dissipator rate must be finite and nonnegative");
  require_same_space(t.jump.space(), space, "dissipator");
}

void check_hermitian(const Operator& h) {
  if (!h.is_hermitian(1e-10)) throw std::invalid_argument("Hamiltonian is not Hermitian");
}

// I⊗A: block-diagonal copies of A acting on the row index.
void push_left(std::vector<Triplet>& trip, const SparseMat& a, int dim) {
  for (int c = 0; c < a.outerSize(); ++c)
    for (SparseMat::InnerIterator it(a, c); it; ++it)
      for (int j = 0; j < dim; ++j)
        trip.emplace_back(static_cast<int>(it.row()) + dim * j, c + dim * j, it.value());
}

// B⊗I: B acting on the column index.
void push_right(std::vector<Triplet>& trip, const SparseMat& b, int dim) {
  for (int c = 0; c < b.outerSize(); ++c)
    for (SparseMat::InnerIterator it(b, c); it; ++it)
      for (int i = 0; i < dim; ++i)
        trip.emplace_back(i + dim * static_cast<int>(it.row()), i + dim * c, it.value());
}

// rate·(L̄⊗L).
void push_sandwich(std::vector<Triplet>& trip, const SparseMat& l, double rate, int dim) {
  for (int cj = 0; cj < l.outerSize(); ++cj)
    for (SparseMat::InnerIterator jt(l, cj); jt; ++jt) {
      const cplx right = rate * std::conj(jt.value());
      const int rj = static_cast<int>(jt.row());
      for (int ci = 0; ci < l.outerSize(); ++ci)
        for (SparseMat::InnerIterator it(l, ci); it; ++it)
          trip.emplace_back(static_cast<int>(it.row()) + dim * rj, ci + dim * cj,
                            right * it.value());
    }
}

void push_family(std::vector<Triplet>& trip, const std::vector<DissipatorTerm>& family, int dim) {
  std::map<std::pair<int, int>, int> slot;
  for (const auto& t : family)
    for (int c = 0; c < t.jump.matrix().outerSize(); ++c)
      for (SparseMat::InnerIterator it(t.jump.matrix(), c); it; ++it)
        slot.emplace(std::make_pair(static_cast<int>(it.row()), c), 0);
  std::vector<std::pair<int, int>> entries;
  entries.reserve(slot.size());
  for (auto& [key, idx] : slot) {
    idx = static_cast<int>(entries.size());
    entries.push_back(key);
  }
  const auto ne = static_cast<Eigen::Index>(entries.size());
  DenseMat m = DenseMat::Zero(ne, static_cast<Eigen::Index>(family.size()));
  Eigen::VectorXd w(static_cast<Eigen::Index>(family.size()));
  for (std::size_t k = 0; k < family.size(); ++k) {
    w(static_cast<Eigen::Index>(k)) = family[k].rate;
    const auto& l = family[k].jump.matrix();
    for (int c = 0; c < l.outerSize(); ++c)
      for (SparseMat::InnerIterator it(l, c); it; ++it)
        m(slot.at({static_cast<int>(it.row()), c}), static_cast<Eigen::Index>(k)) = it.value();
  }
  // G(e1,e2) = Σ_k r_k L_k[e1]·conj(L_k[e2]).
  const DenseMat g = m * w.asDiagonal() * m.adjoint();
  for (Eigen::Index e2 = 0; e2 < ne; ++e2) {
    const auto [j, jp] = entries[static_cast<std::size_t>(e2)];
    for (Eigen::Index e1 = 0; e1 < ne; ++e1) {
      const cplx v = g(e1, e2);
      if (v == cplx(0.0)) continue;
      const auto [i, ip] = entries[static_cast<std::size_t>(e1)];
      trip.emplace_back(i + dim * j, ip + dim * jp, v);
    }
  }
}

SparseMat from_triplets(std::vector<Triplet>& trip, int dim) {
  const int n = dim * dim;
  SparseMat m(n, n);
  m.setFromTriplets(trip.begin(), trip.end());
  std::vector<Triplet>().swap(trip);
  m.prune([](int, int, const cplx& v) { return v != cplx(0.0); });
  m.makeCompressed();
  return m;
}

}  // namespace

Superoperator hamiltonian_superoperator(const Operator& h) {
  check_hermitian(h);
  const int dim = h.dim();
  std::vector<Triplet> trip;
  trip.reserve(2 * static_cast<std::size_t>(h.matrix().nonZeros()) * dim);
  const cplx mi(0.0, -1.0);
  push_left(trip, SparseMat(mi * h.matrix()), dim);
  push_right(trip, SparseMat(-mi * SparseMat(h.matrix().transpose())), dim);
  return Superoperator(h.space_ptr(), from_triplets(trip, dim));
}

Superoperator dissipator_superoperator(const DissipatorTerm& term) {
  check_term(term, term.jump.space());
  const int dim = term.jump.dim();
  const SparseMat& l = term.jump.matrix();
  const SparseMat k = SparseMat(l.adjoint()) * l;
  std::vector<Triplet> trip;
  push_sandwich(trip, l, term.rate, dim);
  push_left(trip, SparseMat(cplx(-0.5 * term.rate) * k), dim);
  push_right(trip, SparseMat(cplx(-0.5 * term.rate) * SparseMat(k.transpose())), dim);
  return Superoperator(term.jump.space_ptr(), from_triplets(trip, dim));
}

Superoperator compose(const SpacePtr& space, std::span<const Superoperator> terms) {
  const int n = space->dim() * space->dim();
  SparseMat sum(n, n);
  for (const auto& t : terms) {
    require_same_space(*space, t.space(), "compose");
    sum += t.matrix();
  }
  return Superoperator(space, std::move(sum));
}

DenseMat apply_dissipator(const DissipatorTerm& term, const DenseMat& rho) {
  const SparseMat& l = term.jump.matrix();
  if (rho.rows() != l.rows() || rho.cols() != l.cols())
    throw SpaceMismatchError("apply_dissipator: density matrix size mismatch");
  const DenseMat lr = l * rho;
  const SparseMat ld = l.adjoint();
  const DenseMat lrl = lr * ld;
  const DenseMat klr = ld * lr;
  return term.rate * (lrl - 0.5 * (klr + klr.adjoint()));
}

Superoperator lindblad_generator(const Operator& h, std::span<const DissipatorTerm> terms,
                                 std::span<const std::vector<DissipatorTerm>> families) {
  check_hermitian(h);
  const int dim = h.dim();
  const cplx half_i(0.0, 0.5);
  // H_eff = H − (i/2) Σ r L†L
  SparseMat heff = h.matrix();
  auto add_decay = [&](const DissipatorTerm& t) {
    check_term(t, h.space());
    if (t.rate == 0.0) return;
    heff -= half_i * t.rate * SparseMat(SparseMat(t.jump.matrix().adjoint()) * t.jump.matrix());
  };
  for (const auto& t : terms) add_decay(t);
  for (const auto& f : families)
    for (const auto& t : f) add_decay(t);
  heff.prune([](int, int, const cplx& v) { return v != cplx(0.0); });

  std::vector<Triplet> trip;
  trip.reserve(static_cast<std::size_t>(estimate_generator_nonzeros(h, terms, families)));
  // −i H_eff ρ + i ρ H_eff†  →  I⊗(−iH_eff) + (i·conj(H_eff))⊗I
  push_left(trip, SparseMat(cplx(0.0, -1.0) * heff), dim);
  push_right(trip, SparseMat(cplx(0.0, 1.0) * SparseMat(heff.conjugate())), dim);
  for (const auto& t : terms)
    if (t.rate > 0.0) push_sandwich(trip, t.jump.matrix(), t.rate, dim);
  for (const auto& f : families)
    if (!f.empty()) push_family(trip, f, dim);
  return Superoperator(h.space_ptr(), from_triplets(trip, dim));
}

double estimate_generator_nonzeros(const Operator& h, std::span<const DissipatorTerm> terms,
                                   std::span<const std::vector<DissipatorTerm>> families) {
  const double dim = h.dim();
  double heff = static_cast<double>(h.matrix().nonZeros()) + dim;
  double jumps = 0.0;
  for (const auto& t : terms) {
    const double nz = static_cast<double>(t.jump.matrix().nonZeros());
    jumps += nz * nz;
    heff += nz;
  }
  for (const auto& f : families) {
    double nz = 0.0;
    for (const auto& t : f) nz = std::max(nz, static_cast<double>(t.jump.matrix().nonZeros()));
    jumps += nz * nz;
    heff += nz;
  }
  return 2.0 * std::min(heff, dim * dim) * dim + jumps;
}

double trace_preservation_defect(const Superoperator& gen) {
  const SparseMat& m = gen.matrix();
  const int dim = gen.dim();
  double worst = 0.0;
  for (int c = 0; c < m.outerSize(); ++c) {
    cplx s = 0.0;
    for (SparseMat::InnerIterator it(m, c); it; ++it)
      if (it.row() % (dim + 1) == 0) s += it.value();
    worst = std::max(worst, std::abs(s));
  }
  const double scale = gen.max_abs();
  return scale > 0.0 ? worst / scale : 0.0;
}

}  // namespace qarsim
