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
#include <vector>

#include "qarsim/hilbert.hpp"

namespace qarsim {

// Acts on column-stacked density matrices: v[i + dim·j] = ρ[i,j].
class Superoperator {
 public:
  Superoperator(SpacePtr space, SparseMat matrix);

  const CompositeSpace& space() const { return *space_; }
  const SpacePtr& space_ptr() const { return space_; }
  const SparseMat& matrix() const { return matrix_; }
  int dim() const { return space_->dim(); }

  DenseMat apply(const DenseMat& rho) const;
  double max_abs() const;
  // Max column sum of |entries|, the induced 1-norm.
  double norm1() const;

  Superoperator& operator+=(const Superoperator& rhs);
  friend Superoperator operator+(Superoperator lhs, const Superoperator& rhs) {
    return lhs += rhs;
  }

 private:
  SpacePtr space_;
  SparseMat matrix_;
};

struct DissipatorTerm {
  double rate = 0.0;
  Operator jump;
};

Vec vectorize(const DenseMat& rho);
DenseMat devectorize(const Vec& v);

Superoperator hamiltonian_superoperator(const Operator& h);
Superoperator dissipator_superoperator(const DissipatorTerm& term);
Superoperator compose(const SpacePtr& space, std::span<const Superoperator> terms);

// rate·(LρL† − ½{L†L, ρ}) evaluated directly on a dense ρ.
DenseMat apply_dissipator(const DissipatorTerm& term, const DenseMat& rho);

// One-pass assembly of −i[H,·] + Σ D_k. Each entry of `families` is a group of
// jumps (typically quadrature nodes) summed through a Gram product over their
// union pattern instead of one Kronecker product per node.
Superoperator lindblad_generator(const Operator& h, std::span<const DissipatorTerm> terms,
                                 std::span<const std::vector<DissipatorTerm>> families = {});

// Upper bound on the stored nonzeros of lindblad_generator, from operator
// patterns only.
double estimate_generator_nonzeros(const Operator& h, std::span<const DissipatorTerm> terms,
                                   std::span<const std::vector<DissipatorTerm>> families = {});

// max |1ᵀ_vec·L| / max |L|.
double trace_preservation_defect(const Superoperator& gen);

}  // namespace qarsim
