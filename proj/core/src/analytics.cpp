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

#include "qarsim/analytics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace qarsim {

cplx spectral_correlation(double omega, double epsilon, double gamma) {
  if (!(gamma >= 0.0)) throw std::invalid_argument("spectral_correlation: negative linewidth");
  const double x = omega - epsilon;
  const double den = gamma * gamma + 4.0 * x * x;
  if (den == 0.0) throw std::invalid_argument("spectral_correlation: pole at zero linewidth");
  return cplx(2.0 * gamma, 4.0 * x) / den;
}

EffectiveCoupling effective_coupling(const CrossedCavityParams& p) {
  EffectiveCoupling k{0.0, 0.0};
  for (const auto& ion : p.ion_list()) {
    if (ion.detuning == 0.0) throw std::invalid_argument("effective_coupling: zero detuning");
    const double num = ion.g_tilde_b() * ion.g_tilde_c() * ion.eta;
    k.k_full += num * spectral_correlation(ion.detuning, 0.0, p.gamma_sp).imag();
    k.k_limit += num / ion.detuning;
  }
  return k;
}

double phonon_trajectory(const PhononDecayModel& m, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("phonon_trajectory: negative time");
  const double ninf = m.n_inf();
  return ninf + std::exp(-m.gamma_cool * t) * (m.n0 - ninf);
}

double cooling_rate(double k, double nbar_b, double kappa_b, double kappa_c) {
  if (!(kappa_b + kappa_c > 0.0))
    throw std::invalid_argument("cooling_rate: line widths must not both vanish");
  return 2.0 * k * k * nbar_b / (kappa_b + kappa_c);
}

double cooling_rate(const CrossedCavityParams& p) {
  return cooling_rate(effective_coupling(p).k_limit, p.cavity_b_occupation(), p.kappa_b,
                      p.kappa_c);
}

Superoperator appendix_b_generator(double nu, double lambda, double gamma_cool, int d_phonon) {
  auto space = CompositeSpace::make({SubsystemSpec::boson("a", d_phonon)});
  const Operator a = annihilation(space, "a");
  const std::vector<DissipatorTerm> terms{{lambda + gamma_cool, a}, {lambda, a.adjoint()}};
  return lindblad_generator(nu * number_operator(space, "a"), terms);
}

Superoperator appendix_b_generator(const CrossedCavityParams& p) {
  return appendix_b_generator(p.nu, p.lambda, cooling_rate(p), p.d_phonon);
}

namespace {

struct LinearFit {
  double n_inf, n0, sse;
};

LinearFit fit_at(double gamma, std::span<const double> t, std::span<const double> n) {
  // Normal equations for n ≈ n_inf·(1−e) + n0·e.
  double s11 = 0, s12 = 0, s22 = 0, r1 = 0, r2 = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double e = std::exp(-gamma * t[i]);
    const double f1 = 1.0 - e;
    s11 += f1 * f1;
    s12 += f1 * e;
    s22 += e * e;
    r1 += f1 * n[i];
    r2 += e * n[i];
  }
  const double det = s11 * s22 - s12 * s12;
  LinearFit f{0.0, 0.0, std::numeric_limits<double>::infinity()};
  if (std::abs(det) < 1e-300) return f;
  f.n_inf = (r1 * s22 - r2 * s12) / det;
  f.n0 = (s11 * r2 - s12 * r1) / det;
  double sse = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double e = std::exp(-gamma * t[i]);
    const double d = f.n_inf * (1.0 - e) + f.n0 * e - n[i];
    sse += d * d;
  }
  f.sse = sse;
  return f;
}

}  // namespace

RelaxationFit fit_relaxation(std::span<const double> t, std::span<const double> n) {
  if (t.size() != n.size() || t.size() < 3)
    throw std::invalid_argument("fit_relaxation: need at least three matching samples");
  const double span = t.back() - t.front();
  if (!(span > 0.0)) throw std::invalid_argument("fit_relaxation: times must increase");
  double lo = std::log(1e-3 / span);
  double hi = std::log(1e3 / span);
  constexpr int kScan = 240;
  int best = 0;
  double best_sse = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= kScan; ++i) {
    const double sse = fit_at(std::exp(lo + (hi - lo) * i / kScan), t, n).sse;
    if (sse < best_sse) {
      best_sse = sse;
      best = i;
    }
  }
  const double step = (hi - lo) / kScan;
  double a = lo + step * std::max(best - 1, 0);
  double b = lo + step * std::min(best + 1, kScan);
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
  double f1 = fit_at(std::exp(x1), t, n).sse, f2 = fit_at(std::exp(x2), t, n).sse;
  for (int it = 0; it < 200 && b - a > 1e-12; ++it) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = fit_at(std::exp(x1), t, n).sse;
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = fit_at(std::exp(x2), t, n).sse;
    }
  }
  const double gamma = std::exp(0.5 * (a + b));
  const LinearFit f = fit_at(gamma, t, n);
  return {gamma, f.n_inf, f.n0, std::sqrt(f.sse / static_cast<double>(t.size()))};
}

}  // namespace qarsim
