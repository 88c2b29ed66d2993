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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>

#include "qarsim/solvers.hpp"

namespace qarsim {

const char* to_string(SteadyMethod m) {
  switch (m) {
    case SteadyMethod::Auto: return "auto";
    case SteadyMethod::SparseLu: return "sparse_lu";
    case SteadyMethod::DenseLu: return "dense_lu";
    case SteadyMethod::InverseIteration: return "inverse_iteration";
    case SteadyMethod::DenseEigen: return "dense_eigen";
  }
  return "unknown";
}

SteadyMethod steady_method_from_string(const std::string& s) {
  for (auto m : {SteadyMethod::Auto, SteadyMethod::SparseLu, SteadyMethod::DenseLu,
                 SteadyMethod::InverseIteration, SteadyMethod::DenseEigen})
    if (s == to_string(m)) return m;
  throw std::invalid_argument("unknown steady-state method '" + s + "'");
}

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      auto& p = parent[static_cast<std::size_t>(x)];
      p = parent[static_cast<std::size_t>(p)];
      x = p;
    }
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
  }
};

}  // namespace

SectorPartition structural_sectors(const Superoperator& gen) {
  const SparseMat& m = gen.matrix();
  const int n = static_cast<int>(m.rows());
  UnionFind uf(n);
  for (int c = 0; c < m.outerSize(); ++c)
    for (SparseMat::InnerIterator it(m, c); it; ++it) uf.unite(static_cast<int>(it.row()), c);
  SectorPartition p;
  p.label.assign(static_cast<std::size_t>(n), -1);
  std::vector<int> id(static_cast<std::size_t>(n), -1);
  for (int i = 0; i < n; ++i) {
    const int r = uf.find(i);
    if (id[static_cast<std::size_t>(r)] < 0) id[static_cast<std::size_t>(r)] = p.count++;
    p.label[static_cast<std::size_t>(i)] = id[static_cast<std::size_t>(r)];
  }
  return p;
}

namespace {

struct Reduced {
  std::vector<int> index;  // global vectorized indices, ascending
  SparseMat a;             // 𝓛 restricted to `index`
};

Reduced restrict_to(const Superoperator& gen, std::vector<int> index) {
  const SparseMat& m = gen.matrix();
  std::vector<int> local(static_cast<std::size_t>(m.rows()), -1);
  for (std::size_t k = 0; k < index.size(); ++k) local[static_cast<std::size_t>(index[k])] =
      static_cast<int>(k);
  std::vector<Triplet> trip;
  for (std::size_t k = 0; k < index.size(); ++k)
    for (SparseMat::InnerIterator it(m, index[k]); it; ++it) {
      const int r = local[static_cast<std::size_t>(it.row())];
      if (r >= 0) trip.emplace_back(r, static_cast<int>(k), it.value());
    }
  const auto n = static_cast<int>(index.size());
  Reduced out{std::move(index), SparseMat(n, n)};
  out.a.setFromTriplets(trip.begin(), trip.end());
  out.a.makeCompressed();
  return out;
}

// Row `pivot` of A replaced by the trace functional.
SparseMat with_trace_row(const SparseMat& a, const std::vector<int>& index, int dim, int pivot) {
  std::vector<Triplet> trip;
  trip.reserve(static_cast<std::size_t>(a.nonZeros()) + index.size());
  for (int c = 0; c < a.outerSize(); ++c)
    for (SparseMat::InnerIterator it(a, c); it; ++it)
      if (it.row() != pivot) trip.emplace_back(static_cast<int>(it.row()), c, it.value());
  for (std::size_t k = 0; k < index.size(); ++k)
    if (index[k] % (dim + 1) == 0) trip.emplace_back(pivot, static_cast<int>(k), cplx(1.0));
  SparseMat out(a.rows(), a.cols());
  out.setFromTriplets(trip.begin(), trip.end());
  out.makeCompressed();
  return out;
}

void check_budget(double bytes, const SteadyStateOptions& o, const char* what) {
  if (bytes > o.memory_budget_bytes)
    throw MemoryBudgetError(std::string(what) + " exceeds the memory budget", bytes,
                            o.memory_budget_bytes);
}

using RealSparse = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;

// Coordinates in which Hermitian operators are real vectors: ρ_ii, and
// (Re ρ_ij, Im ρ_ij) for i < j. 𝓛 preserves Hermiticity, so restricted to
// these coordinates it is a real matrix of the same size.
struct HermitianBasis {
  std::vector<int> var;     // first real variable of each local index (−1 for i > j)
  std::vector<int> mirror;  // local index of the transpose
  std::vector<char> kind;   // 0 diagonal, 1 upper, 2 lower
};

bool hermitian_basis(const std::vector<int>& index, int dim, HermitianBasis& hb) {
  const auto m = index.size();
  std::vector<int> local(static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim), -1);
  for (std::size_t k = 0; k < m; ++k) local[static_cast<std::size_t>(index[k])] = static_cast<int>(k);
  hb.var.assign(m, -1);
  hb.mirror.assign(m, -1);
  hb.kind.assign(m, 0);
  int next = 0;
  for (std::size_t k = 0; k < m; ++k) {
    const int i = index[k] % dim, j = index[k] / dim;
    const int t = local[static_cast<std::size_t>(j + dim * i)];
    if (t < 0) return false;
    hb.mirror[k] = t;
    hb.kind[k] = i == j ? 0 : (i < j ? 1 : 2);
    if (i == j) hb.var[k] = next++;
    else if (i < j) { hb.var[k] = next; next += 2; }
  }
  for (std::size_t k = 0; k < m; ++k)
    if (hb.kind[k] == 2) hb.var[k] = hb.var[static_cast<std::size_t>(hb.mirror[k])];
  return true;
}

RealSparse real_system(const SparseMat& a, const std::vector<int>& index, int dim,
                       const HermitianBasis& hb, int pivot_var) {
  const auto m = static_cast<int>(index.size());
  std::vector<Triplet> tt;
  tt.reserve(static_cast<std::size_t>(2 * m));
  for (int k = 0; k < m; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    if (hb.kind[ku] == 0) {
      tt.emplace_back(k, hb.var[ku], 1.0);
    } else if (hb.kind[ku] == 1) {
      tt.emplace_back(k, hb.var[ku], 1.0);
      tt.emplace_back(k, hb.var[ku] + 1, cplx(0.0, 1.0));
    } else {
      tt.emplace_back(k, hb.var[ku], 1.0);
      tt.emplace_back(k, hb.var[ku] + 1, cplx(0.0, -1.0));
    }
  }
  SparseMat t(m, m);
  t.setFromTriplets(tt.begin(), tt.end());
  const SparseMat b = a * t;
  std::vector<Eigen::Triplet<double>> rt;
  rt.reserve(static_cast<std::size_t>(b.nonZeros()));
  for (int c = 0; c < b.outerSize(); ++c)
    for (SparseMat::InnerIterator it(b, c); it; ++it) {
      const auto r = static_cast<std::size_t>(it.row());
      const int v = hb.var[r];
      if (hb.kind[r] == 0) {
        if (v != pivot_var && it.value().real() != 0.0) rt.emplace_back(v, c, it.value().real());
      } else if (hb.kind[r] == 1) {
        if (it.value().real() != 0.0) rt.emplace_back(v, c, it.value().real());
        if (it.value().imag() != 0.0) rt.emplace_back(v + 1, c, it.value().imag());
      }
    }
  for (int k = 0; k < m; ++k)
    if (index[static_cast<std::size_t>(k)] % (dim + 1) == 0)
      rt.emplace_back(pivot_var, hb.var[static_cast<std::size_t>(k)], 1.0);
  RealSparse out(m, m);
  out.setFromTriplets(rt.begin(), rt.end());
  out.makeCompressed();
  return out;
}

template <class Matrix, class Vector>
bool lu_solve(const Matrix& sys, int pivot, bool dense, Vector& x) {
  using Scalar = typename Matrix::Scalar;
  Vector rhs = Vector::Zero(sys.rows());
  rhs(pivot) = Scalar(1.0);
  if (dense) {
    using Dense = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    Eigen::PartialPivLU<Dense> lu{Dense(sys)};
    x = lu.solve(rhs);
  } else {
    Eigen::SparseLU<Matrix, Eigen::COLAMDOrdering<int>> lu;
    lu.analyzePattern(sys);
    lu.factorize(sys);
    if (lu.info() != Eigen::Success) return false;
    x = lu.solve(rhs);
    if (lu.info() != Eigen::Success) return false;
  }
  return x.allFinite();
}

// Trace-replacement solve; real arithmetic when the sector is closed under
// transposition, which it is for any generator of Lindblad form.
bool solve_lu(const SparseMat& a, const std::vector<int>& index, int dim, int pivot, bool dense,
              Vec& x) {
  HermitianBasis hb;
  if (hermitian_basis(index, dim, hb)) {
    const int pv = hb.var[static_cast<std::size_t>(pivot)];
    Eigen::VectorXd y;
    if (!lu_solve(real_system(a, index, dim, hb, pv), pv, dense, y)) return false;
    x.resize(a.rows());
    for (std::size_t k = 0; k < index.size(); ++k) {
      const int v = hb.var[k];
      switch (hb.kind[k]) {
        case 0: x(static_cast<Eigen::Index>(k)) = y(v); break;
        case 1: x(static_cast<Eigen::Index>(k)) = cplx(y(v), y(v + 1)); break;
        default: x(static_cast<Eigen::Index>(k)) = cplx(y(v), -y(v + 1)); break;
      }
    }
    return true;
  }
  return lu_solve(with_trace_row(a, index, dim, pivot), pivot, dense, x);
}

bool solve_inverse_iteration(const SparseMat& a, const SteadyStateOptions& o, Vec& x,
                             int& iterations) {
  SparseMat ata = SparseMat(a.adjoint()) * a;
  double scale = 0.0;
  for (int k = 0; k < ata.nonZeros(); ++k) scale = std::max(scale, std::abs(ata.valuePtr()[k]));
  const double shift = 1e-14 * std::max(scale, 1e-300);
  SparseMat id(a.rows(), a.cols());
  id.setIdentity();
  ata += cplx(shift) * id;
  Eigen::SparseLU<SparseMat, Eigen::COLAMDOrdering<int>> lu;
  lu.compute(ata);
  if (lu.info() != Eigen::Success) return false;
  x = Vec::Ones(a.rows()) / std::sqrt(static_cast<double>(a.rows()));
  const double anorm = std::sqrt(scale);
  for (iterations = 1; iterations <= o.max_iterations; ++iterations) {
    x = lu.solve(x);
    if (!x.allFinite()) return false;
    x /= x.norm();
    if ((a * x).norm() <= o.tolerance * std::max(anorm, 1e-300)) return true;
  }
  return (a * x).norm() <= 1e3 * o.tolerance * std::max(anorm, 1e-300);
}

bool solve_dense_eigen(const SparseMat& a, Vec& x) {
  Eigen::ComplexEigenSolver<DenseMat> es(DenseMat(a), true);
  if (es.info() != Eigen::Success) return false;
  Eigen::Index best = 0;
  es.eigenvalues().cwiseAbs().minCoeff(&best);
  x = es.eigenvectors().col(best);
  return x.allFinite();
}

}  // namespace

SteadyStateResult steady_state(const Superoperator& gen, const SteadyStateOptions& o) {
  const int dim = gen.dim();
  const int n = dim * dim;
  if (trace_preservation_defect(gen) > 1e-10)
    throw SolverError(SolverFailure::NotTracePreserving,
                      "steady_state: generator is not trace preserving");

  SteadyStateResult res;
  std::vector<int> index;
  if (o.reduce_sectors) {
    const SectorPartition part = structural_sectors(gen);
    std::vector<int> diag_sectors;
    for (int i = 0; i < dim; ++i) {
      const int s = part.label[static_cast<std::size_t>(i * (dim + 1))];
      if (std::find(diag_sectors.begin(), diag_sectors.end(), s) == diag_sectors.end())
        diag_sectors.push_back(s);
    }
    res.diagonal_sectors = static_cast<int>(diag_sectors.size());
    res.degenerate = diag_sectors.size() > 1;
    const int keep = part.label[0];
    for (int i = 0; i < n; ++i)
      if (part.label[static_cast<std::size_t>(i)] == keep) index.push_back(i);
  } else {
    index.resize(static_cast<std::size_t>(n));
    std::iota(index.begin(), index.end(), 0);
    res.diagonal_sectors = 1;
  }
  Reduced red = restrict_to(gen, std::move(index));
  const auto m = static_cast<long long>(red.index.size());
  res.reduced_size = m;
  // Last diagonal index of the retained sector.
  int pivot = 0;
  for (std::size_t k = 0; k < red.index.size(); ++k)
    if (red.index[k] % (dim + 1) == 0) pivot = static_cast<int>(k);

  const double density = static_cast<double>(red.a.nonZeros()) / (static_cast<double>(m) * m);
  SteadyMethod method = o.method;
  if (method == SteadyMethod::Auto)
    method = (m <= o.dense_lu_max_size && (density >= o.dense_lu_min_density || m <= 64))
                 ? SteadyMethod::DenseLu
                 : SteadyMethod::SparseLu;

  Vec x;
  bool ok = false;
  auto try_lu = [&](bool dense) {
    if (dense)
      check_budget(8.0 * static_cast<double>(m) * static_cast<double>(m), o, "dense LU");
    else
      check_budget(16.0 * static_cast<double>(red.a.nonZeros()) * o.lu_fill_factor, o,
                   "sparse LU");
    res.method = dense ? SteadyMethod::DenseLu : SteadyMethod::SparseLu;
    res.iterations = 1;
    return solve_lu(red.a, red.index, dim, pivot, dense, x);
  };
  auto try_inverse = [&] {
    res.method = SteadyMethod::InverseIteration;
    return solve_inverse_iteration(red.a, o, x, res.iterations);
  };
  auto try_eigen = [&] {
    res.method = SteadyMethod::DenseEigen;
    res.iterations = 1;
    return solve_dense_eigen(red.a, x);
  };

  switch (method) {
    case SteadyMethod::DenseLu:
    case SteadyMethod::SparseLu:
      ok = try_lu(method == SteadyMethod::DenseLu);
      if (!ok) ok = try_inverse();
      if (!ok && dim <= o.dense_fallback_dim) ok = try_eigen();
      break;
    case SteadyMethod::InverseIteration:
      ok = try_inverse();
      if (!ok && dim <= o.dense_fallback_dim) ok = try_eigen();
      break;
    case SteadyMethod::DenseEigen:
      if (dim > o.dense_fallback_dim * 4)
        throw std::invalid_argument("dense_eigen method is limited to small spaces");
      ok = try_eigen();
      break;
    case SteadyMethod::Auto: break;
  }
  if (!ok) throw SolverError(SolverFailure::NonConvergence, "steady_state: no solver converged");

  Vec v = Vec::Zero(n);
  for (std::size_t k = 0; k < red.index.size(); ++k)
    v(red.index[k]) = x(static_cast<Eigen::Index>(k));
  DenseMat rho = devectorize(v);
  cplx tr = rho.trace();
  if (std::abs(tr) == 0.0)
    throw SolverError(SolverFailure::NonConvergence, "steady_state: null vector has zero trace");
  rho /= tr;
  res.hermiticity_defect = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  rho = (0.5 * (rho + rho.adjoint())).eval();

  Eigen::SelfAdjointEigenSolver<DenseMat> es(rho);
  Eigen::VectorXd ev = es.eigenvalues();
  res.min_eigenvalue = ev.minCoeff();
  if (res.min_eigenvalue < -o.positivity_floor)
    throw SolverError(SolverFailure::Positivity,
                      "steady_state: stationary state has eigenvalue " +
                          std::to_string(res.min_eigenvalue) + " below the positivity floor");
  if (res.min_eigenvalue < 0.0) {
    for (Eigen::Index i = 0; i < ev.size(); ++i)
      if (ev(i) < 0.0) {
        res.clipped_weight -= ev(i);
        ev(i) = 0.0;
      }
    rho = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
    rho = (0.5 * (rho + rho.adjoint())).eval();
    rho /= rho.trace().real();
  }
  res.trace_defect = std::abs(rho.trace() - cplx(1.0));
  res.rho = std::move(rho);
  res.residual = (gen.matrix() * vectorize(res.rho)).norm();
  res.generator_norm = gen.norm1();
  res.relative_residual = res.generator_norm > 0.0 ? res.residual / res.generator_norm : 0.0;
  return res;
}

double trace_distance(const DenseMat& a, const DenseMat& b) {
  const DenseMat d = 0.5 * ((a - b) + (a - b).adjoint());
  Eigen::SelfAdjointEigenSolver<DenseMat> es(d, Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

}  // namespace qarsim
