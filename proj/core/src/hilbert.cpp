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

#include "qarsim/hilbert.hpp"

#include <cmath>
#include <sstream>
#include <unordered_set>

#include <unsupported/Eigen/MatrixFunctions>

namespace qarsim {

SubsystemSpec SubsystemSpec::boson(std::string label, int truncation) {
  return {FactorKind::BosonicMode, truncation, std::move(label)};
}

SubsystemSpec SubsystemSpec::two_level(std::string label) {
  return {FactorKind::TwoLevel, 2, std::move(label)};
}

CompositeSpace::CompositeSpace(std::vector<SubsystemSpec> factors) : factors_(std::move(factors)) {
  if (factors_.empty()) throw std::invalid_argument("CompositeSpace needs at least one factor");
  std::unordered_set<std::string> seen;
  for (const auto& f : factors_) {
    if (f.label.empty()) throw std::invalid_argument("subsystem label must be non-empty");
    if (!seen.insert(f.label).second)
      throw std::invalid_argument("duplicate subsystem label '" + f.label + "'");
    if (f.kind == FactorKind::BosonicMode && f.truncation < 2)
      throw std::invalid_argument("bosonic mode '" + f.label + "' needs truncation >= 2");
  }
  strides_.assign(factors_.size(), 1);
  long long total = 1;
  for (std::size_t k = factors_.size(); k-- > 0;) {
    strides_[k] = static_cast<int>(total);
    total *= factors_[k].dimension();
    if (total > (1LL << 20)) throw std::invalid_argument("composite dimension too large");
  }
  dim_ = static_cast<int>(total);
}

std::shared_ptr<const CompositeSpace> CompositeSpace::make(std::vector<SubsystemSpec> factors) {
  return std::make_shared<const CompositeSpace>(std::move(factors));
}

std::size_t CompositeSpace::index_of(std::string_view label) const {
  for (std::size_t k = 0; k < factors_.size(); ++k)
    if (factors_[k].label == label) return k;
  throw std::invalid_argument("unknown subsystem label '" + std::string(label) + "'");
}

bool CompositeSpace::has(std::string_view label) const {
  for (const auto& f : factors_)
    if (f.label == label) return true;
  return false;
}

std::vector<int> CompositeSpace::digits(int index) const {
  std::vector<int> out(factors_.size());
  for (std::size_t k = 0; k < factors_.size(); ++k) {
    out[k] = index / strides_[k];
    index %= strides_[k];
  }
  return out;
}

std::string CompositeSpace::describe() const {
  std::ostringstream os;
  for (std::size_t k = 0; k < factors_.size(); ++k) {
    if (k) os << " x ";
    os << factors_[k].label << '[' << factors_[k].dimension() << ']';
  }
  return os.str();
}

void require_same_space(const CompositeSpace& a, const CompositeSpace& b, const char* where) {
  if (&a == &b || a == b) return;
  throw SpaceMismatchError(std::string(where) + ": space mismatch (" + a.describe() + " vs " +
                           b.describe() + ")");
}

Operator::Operator(SpacePtr space, SparseMat matrix)
    : space_(std::move(space)), matrix_(std::move(matrix)) {
  if (!space_) throw std::invalid_argument("Operator needs a space");
  if (matrix_.rows() != space_->dim() || matrix_.cols() != space_->dim())
    throw std::invalid_argument("operator shape does not match space dimension");
  matrix_.makeCompressed();
}

Operator Operator::adjoint() const { return Operator(space_, SparseMat(matrix_.adjoint())); }

double Operator::max_abs() const {
  double m = 0.0;
  for (int k = 0; k < matrix_.outerSize(); ++k)
    for (SparseMat::InnerIterator it(matrix_, k); it; ++it) m = std::max(m, std::abs(it.value()));
  return m;
}

bool Operator::is_hermitian(double rel_tol) const {
  SparseMat diff = matrix_ - SparseMat(matrix_.adjoint());
  double d = 0.0;
  for (int k = 0; k < diff.outerSize(); ++k)
    for (SparseMat::InnerIterator it(diff, k); it; ++it) d = std::max(d, std::abs(it.value()));
  return d <= rel_tol * std::max(max_abs(), 1e-300);
}

Operator& Operator::operator+=(const Operator& rhs) {
  require_same_space(*space_, *rhs.space_, "operator+");
  matrix_ += rhs.matrix_;
  return *this;
}

Operator& Operator::operator-=(const Operator& rhs) {
  require_same_space(*space_, *rhs.space_, "operator-");
  matrix_ -= rhs.matrix_;
  return *this;
}

Operator& Operator::operator*=(cplx s) {
  matrix_ *= s;
  return *this;
}

Operator operator*(const Operator& lhs, const Operator& rhs) {
  require_same_space(lhs.space(), rhs.space(), "operator*");
  return Operator(lhs.space_ptr(), SparseMat(lhs.matrix() * rhs.matrix()));
}

Operator identity(const SpacePtr& space) {
  SparseMat m(space->dim(), space->dim());
  m.setIdentity();
  return Operator(space, std::move(m));
}

Operator zero_operator(const SpacePtr& space) {
  return Operator(space, SparseMat(space->dim(), space->dim()));
}

Operator lift(const SpacePtr& space, std::string_view label, const DenseMat& local,
              double drop_below) {
  const std::size_t k = space->index_of(label);
  const int d = space->factors()[k].dimension();
  if (local.rows() != d || local.cols() != d)
    throw std::invalid_argument("local operator shape does not match factor dimension");
  const int right = space->stride(k);
  const int left = space->dim() / (d * right);
  std::vector<Triplet> trip;
  for (int c = 0; c < d; ++c)
    for (int r = 0; r < d; ++r) {
      const cplx v = local(r, c);
      if (v == cplx(0.0) || std::abs(v) <= drop_below) continue;
      for (int l = 0; l < left; ++l)
        for (int s = 0; s < right; ++s)
          trip.emplace_back((l * d + r) * right + s, (l * d + c) * right + s, v);
    }
  SparseMat m(space->dim(), space->dim());
  m.setFromTriplets(trip.begin(), trip.end());
  return Operator(space, std::move(m));
}

namespace {

const SubsystemSpec& require_kind(const SpacePtr& space, std::string_view label, FactorKind kind) {
  const auto& f = space->factor(label);
  if (f.kind != kind)
    throw std::invalid_argument("subsystem '" + std::string(label) + "' is not " +
                                (kind == FactorKind::TwoLevel ? "a two-level factor"
                                                              : "a bosonic mode"));
  return f;
}

DenseMat ladder(int d) {
  DenseMat a = DenseMat::Zero(d, d);
  for (int n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

}  // namespace

Operator annihilation(const SpacePtr& space, std::string_view label) {
  const auto& f = require_kind(space, label, FactorKind::BosonicMode);
  return lift(space, label, ladder(f.truncation));
}

Operator creation(const SpacePtr& space, std::string_view label) {
  const auto& f = require_kind(space, label, FactorKind::BosonicMode);
  return lift(space, label, ladder(f.truncation).adjoint());
}

Operator number_operator(const SpacePtr& space, std::string_view label) {
  const auto& f = require_kind(space, label, FactorKind::BosonicMode);
  DenseMat n = DenseMat::Zero(f.truncation, f.truncation);
  for (int k = 0; k < f.truncation; ++k) n(k, k) = k;
  return lift(space, label, n);
}

Operator sigma_minus(const SpacePtr& space, std::string_view label) {
  require_kind(space, label, FactorKind::TwoLevel);
  DenseMat s = DenseMat::Zero(2, 2);
  s(0, 1) = 1.0;
  return lift(space, label, s);
}

Operator sigma_plus(const SpacePtr& space, std::string_view label) {
  require_kind(space, label, FactorKind::TwoLevel);
  DenseMat s = DenseMat::Zero(2, 2);
  s(1, 0) = 1.0;
  return lift(space, label, s);
}

Operator excited_projector(const SpacePtr& space, std::string_view label) {
  require_kind(space, label, FactorKind::TwoLevel);
  DenseMat s = DenseMat::Zero(2, 2);
  s(1, 1) = 1.0;
  return lift(space, label, s);
}

DenseMat local_position_exponential(int d, double scale) {
  if (!std::isfinite(scale)) throw std::invalid_argument("position_exponential: non-finite scale");
  if (d < 2) throw std::invalid_argument("position_exponential: truncation must be >= 2");
  DenseMat x = ladder(d);
  x += ladder(d).adjoint().eval();
  DenseMat gen = cplx(0.0, scale) * x;
  return gen.exp();
}

PositionExponential position_exponential(const SpacePtr& space, std::string_view label,
                                         double scale) {
  const auto& f = require_kind(space, label, FactorKind::BosonicMode);
  DenseMat u = local_position_exponential(f.truncation, scale);
  const double defect =
      (u.adjoint() * u - DenseMat::Identity(f.truncation, f.truncation)).norm();
  // Entries below 1e-20 are underflow debris of the exponential; dropping
  // them keeps quadrature families sparse without measurable effect.
  return {lift(space, label, u, 1e-20), defect};
}

Operator commutator(const Operator& a, const Operator& b) { return a * b - b * a; }

Operator anticommutator(const Operator& a, const Operator& b) { return a * b + b * a; }

}  // namespace qarsim
