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

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qarsim/types.hpp"

namespace qarsim {

enum class FactorKind { BosonicMode, TwoLevel };

struct SubsystemSpec {
  FactorKind kind = FactorKind::BosonicMode;
  int truncation = 2;  // ignored for TwoLevel
  std::string label;

  static SubsystemSpec boson(std::string label, int truncation);
  static SubsystemSpec two_level(std::string label);

  int dimension() const { return kind == FactorKind::TwoLevel ? 2 : truncation; }
  bool operator==(const SubsystemSpec&) const = default;
};

// Ordered tensor product of truncated factors. The first factor is the
// slowest-varying composite index.
class CompositeSpace {
 public:
  explicit CompositeSpace(std::vector<SubsystemSpec> factors);

  static std::shared_ptr<const CompositeSpace> make(std::vector<SubsystemSpec> factors);

  int dim() const { return dim_; }
  const std::vector<SubsystemSpec>& factors() const { return factors_; }
  std::size_t index_of(std::string_view label) const;
  bool has(std::string_view label) const;
  const SubsystemSpec& factor(std::string_view label) const { return factors_[index_of(label)]; }
  // Product of the dimensions of all factors after `factor`.
  int stride(std::size_t factor) const { return strides_[factor]; }
  // Per-factor occupation of a composite basis index.
  std::vector<int> digits(int index) const;
  std::string describe() const;

  bool operator==(const CompositeSpace& other) const { return factors_ == other.factors_; }

 private:
  std::vector<SubsystemSpec> factors_;
  std::vector<int> strides_;
  int dim_ = 1;
};

using SpacePtr = std::shared_ptr<const CompositeSpace>;

class Operator {
 public:
  Operator(SpacePtr space, SparseMat matrix);

  const CompositeSpace& space() const { return *space_; }
  const SpacePtr& space_ptr() const { return space_; }
  const SparseMat& matrix() const { return matrix_; }
  int dim() const { return space_->dim(); }

  Operator adjoint() const;
  DenseMat dense() const { return DenseMat(matrix_); }
  bool is_hermitian(double rel_tol = 1e-10) const;
  double max_abs() const;

  Operator& operator+=(const Operator& rhs);
  Operator& operator-=(const Operator& rhs);
  Operator& operator*=(cplx s);

  friend Operator operator+(Operator lhs, const Operator& rhs) { return lhs += rhs; }
  friend Operator operator-(Operator lhs, const Operator& rhs) { return lhs -= rhs; }
  friend Operator operator*(Operator lhs, cplx s) { return lhs *= s; }
  friend Operator operator*(cplx s, Operator rhs) { return rhs *= s; }
  friend Operator operator*(double s, Operator rhs) { return rhs *= cplx(s, 0.0); }
  friend Operator operator*(const Operator& lhs, const Operator& rhs);

 private:
  SpacePtr space_;
  SparseMat matrix_;
};

void require_same_space(const CompositeSpace& a, const CompositeSpace& b, const char* where);

Operator identity(const SpacePtr& space);
Operator zero_operator(const SpacePtr& space);
Operator annihilation(const SpacePtr& space, std::string_view label);
Operator creation(const SpacePtr& space, std::string_view label);
Operator number_operator(const SpacePtr& space, std::string_view label);
Operator sigma_minus(const SpacePtr& space, std::string_view label);
Operator sigma_plus(const SpacePtr& space, std::string_view label);
// σ⁺σ⁻, the projector onto the upper level.
Operator excited_projector(const SpacePtr& space, std::string_view label);

// Embeds a factor-local d×d matrix into the full space by identity padding.
Operator lift(const SpacePtr& space, std::string_view label, const DenseMat& local,
              double drop_below = 0.0);

// exp(i·scale·(a+a†)) on the d×d block of one bosonic factor, by dense
// scaling and squaring.
DenseMat local_position_exponential(int d, double scale);

struct PositionExponential {
  Operator op;
  double unitarity_defect;  // ‖U†U − 1‖ (Frobenius) of the d×d block
};

PositionExponential position_exponential(const SpacePtr& space, std::string_view label,
                                         double scale);

Operator commutator(const Operator& a, const Operator& b);
Operator anticommutator(const Operator& a, const Operator& b);

}  // namespace qarsim
