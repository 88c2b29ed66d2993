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
#include <set>

#include "qarsim/solvers.hpp"

namespace qarsim {

namespace {

// Dormand–Prince 5(4)
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                 b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

struct Functional {
  std::vector<std::pair<int, cplx>> entries;
  cplx operator()(const Vec& y) const {
    cplx s = 0.0;
    for (const auto& [i, w] : entries) s += w * y(i);
    return s;
  }
};

}  // namespace

Trajectory evolve(const Superoperator& gen, const DenseMat& rho0, std::span<const double> t_grid,
                  std::span<const NamedOperator> observables, const EvolveOptions& o) {
  const int dim = gen.dim();
  const int n = dim * dim;
  if (rho0.rows() != dim || rho0.cols() != dim)
    throw SpaceMismatchError("evolve: initial state does not match the generator");
  if (t_grid.empty()) throw std::invalid_argument("evolve: empty time grid");
  for (std::size_t i = 1; i < t_grid.size(); ++i)
    if (!(t_grid[i] > t_grid[i - 1])) throw std::invalid_argument("evolve: times must ascend");
  if (std::abs(rho0.trace() - cplx(1.0)) > 1e-9)
    throw std::invalid_argument("evolve: initial state must have unit trace");
  for (const auto& [name, op] : observables)
    if (op.dim() != dim) throw SpaceMismatchError("evolve: observable '" + name + "' size");

  const Vec v0 = vectorize(rho0);
  std::vector<int> index;
  if (o.reduce_sectors) {
    const SectorPartition part = structural_sectors(gen);
    std::vector<char> live(static_cast<std::size_t>(part.count), 0);
    for (int i = 0; i < n; ++i)
      if (v0(i) != cplx(0.0)) live[static_cast<std::size_t>(part.label[static_cast<std::size_t>(i)])] = 1;
    for (int i = 0; i < n; ++i)
      if (live[static_cast<std::size_t>(part.label[static_cast<std::size_t>(i)])]) index.push_back(i);
  } else {
    index.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) index[static_cast<std::size_t>(i)] = i;
  }
  std::vector<int> local(static_cast<std::size_t>(n), -1);
  for (std::size_t k = 0; k < index.size(); ++k) local[static_cast<std::size_t>(index[k])] = static_cast<int>(k);
  const auto m = static_cast<int>(index.size());
  SparseMat a(m, m);
  {
    std::vector<Triplet> trip;
    for (int k = 0; k < m; ++k)
      for (SparseMat::InnerIterator it(gen.matrix(), index[static_cast<std::size_t>(k)]); it; ++it) {
        const int r = local[static_cast<std::size_t>(it.row())];
        if (r >= 0) trip.emplace_back(r, k, it.value());
      }
    a.setFromTriplets(trip.begin(), trip.end());
    a.makeCompressed();
  }
  Vec y(m);
  for (int k = 0; k < m; ++k) y(k) = v0(index[static_cast<std::size_t>(k)]);

  Functional trace_fn;
  for (int k = 0; k < m; ++k)
    if (index[static_cast<std::size_t>(k)] % (dim + 1) == 0) trace_fn.entries.emplace_back(k, 1.0);
  std::vector<Functional> obs_fn(observables.size());
  for (std::size_t q = 0; q < observables.size(); ++q) {
    const SparseMat& op = observables[q].second.matrix();
    // Tr[Oρ] = Σ O(r,c)·ρ(c,r)
    for (int c = 0; c < op.outerSize(); ++c)
      for (SparseMat::InnerIterator it(op, c); it; ++it) {
        const int l = local[static_cast<std::size_t>(c + dim * static_cast<int>(it.row()))];
        if (l >= 0) obs_fn[q].entries.emplace_back(l, it.value());
      }
  }

  Trajectory traj;
  auto record = [&](double t) {
    traj.times.push_back(t);
    const double tr = trace_fn(y).real();
    traj.trace.push_back(tr);
    traj.max_trace_drift = std::max(traj.max_trace_drift, std::abs(tr - 1.0));
    for (std::size_t q = 0; q < observables.size(); ++q)
      traj.tracks[observables[q].first].push_back(obs_fn[q](y).real());
    if (o.store_states) {
      Vec full = Vec::Zero(n);
      for (int k = 0; k < m; ++k) full(index[static_cast<std::size_t>(k)]) = y(k);
      traj.states.push_back(devectorize(full));
    }
  };

  double anorm = 0.0;
  for (int c = 0; c < a.outerSize(); ++c) {
    double s = 0.0;
    for (SparseMat::InnerIterator it(a, c); it; ++it) s += std::abs(it.value());
    anorm = std::max(anorm, s);
  }
  const double horizon = t_grid.back() - t_grid.front();
  double h = o.initial_step > 0.0 ? o.initial_step
                                  : (anorm > 0.0 ? 0.1 / anorm : std::max(horizon, 1.0));
  const double h_min = o.min_step > 0.0 ? o.min_step : 1e-14 * std::max(horizon, 1e-300);

  double t = t_grid.front();
  record(t);
  Vec k1 = a * y, k2(m), k3(m), k4(m), k5(m), k6(m), k7(m), ynew(m), tmp(m);
  for (std::size_t next = 1; next < t_grid.size(); ++next) {
    const double target = t_grid[next];
    while (t < target) {
      if (traj.accepted_steps + traj.rejected_steps >= o.max_steps)
        throw SolverError(SolverFailure::NonConvergence, "evolve: step budget exhausted");
      bool last = false;
      double step = h;
      if (t + step >= target) {
        step = target - t;
        last = true;
      }
      tmp = y + step * a21 * k1;
      k2 = a * tmp;
      tmp = y + step * (a31 * k1 + a32 * k2);
      k3 = a * tmp;
      tmp = y + step * (a41 * k1 + a42 * k2 + a43 * k3);
      k4 = a * tmp;
      tmp = y + step * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
      k5 = a * tmp;
      tmp = y + step * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
      k6 = a * tmp;
      ynew = y + step * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
      k7 = a * ynew;
      tmp = step * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
      double err = 0.0;
      for (int i = 0; i < m; ++i) {
        const double sc = o.atol + o.rtol * std::max(std::abs(y(i)), std::abs(ynew(i)));
        const double r = std::abs(tmp(i)) / sc;
        err += r * r;
      }
      err = std::sqrt(err / std::max(m, 1));
      if (!std::isfinite(err))
        throw SolverError(SolverFailure::NonConvergence, "evolve: non-finite error estimate");
      const double factor = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
      if (err <= 1.0) {
        t = last ? target : t + step;
        y.swap(ynew);
        k1.swap(k7);
        ++traj.accepted_steps;
        if (o.renormalize_trace) {
          const cplx tr = trace_fn(y);
          y /= tr;
          k1 /= tr;
        }
        if (!last) h = step * factor;
        else h = std::max(h, step * factor);
      } else {
        ++traj.rejected_steps;
        h = step * std::min(factor, 1.0);
        if (h < h_min)
          throw SolverError(SolverFailure::StepUnderflow, "evolve: step size underflow");
      }
    }
    record(target);
  }
  return traj;
}

}  // namespace qarsim
