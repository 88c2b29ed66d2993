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

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace qarsim {

using cplx = std::complex<double>;
using SparseMat = Eigen::SparseMatrix<cplx, Eigen::ColMajor, int>;
using DenseMat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using Triplet = Eigen::Triplet<cplx, int>;

// Base of every library-specific failure. Precondition violations on
// arguments use std::invalid_argument instead.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SpaceMismatchError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class SolverFailure { NonConvergence, Positivity, StepUnderflow, NotTracePreserving };

class SolverError : public Error {
 public:
  SolverError(SolverFailure kind, const std::string& what) : Error(what), kind_(kind) {}
  SolverFailure kind() const noexcept { return kind_; }

 private:
  SolverFailure kind_;
};

class MemoryBudgetError : public Error {
 public:
  MemoryBudgetError(const std::string& what, double required_bytes, double budget_bytes)
      : Error(what), required_(required_bytes), budget_(budget_bytes) {}
  double required_bytes() const noexcept { return required_; }
  double budget_bytes() const noexcept { return budget_; }

 private:
  double required_;
  double budget_;
};

}  // namespace qarsim
