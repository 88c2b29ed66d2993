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

#include "qarsim/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <thread>

#include "qarsim/analytics.hpp"
#include "qarsim/crossed_cavity.hpp"
#include "qarsim/single_cavity.hpp"
#include "qarsim/solvers.hpp"
#include "qarsim/thermo.hpp"

namespace qarsim::cli {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

const std::vector<std::string>& steady_columns() {
  static const std::vector<std::string> cols = {
      "n_a", "n_b", "n_c", "p_e",
      "q_a_w", "q_b_w", "q_c_w", "q_sigma_w", "q_se_w",
      "j_a_qps", "j_b_qps", "j_c_qps",
      "cop", "first_law_rel",
      "residual", "residual_rel", "trace_defect", "hermiticity_defect", "min_eigenvalue",
      "clipped_weight",
      "k_limit_rad_s", "cooling_rate_per_s", "n_inf_analytic",
  };
  return cols;
}

std::optional<double> SteadyRow::value(const std::string& column) const {
  const auto& cols = steady_columns();
  for (std::size_t i = 0; i < cols.size(); ++i)
    if (cols[i] == column) return i < values.size() ? values[i] : std::nullopt;
  throw std::invalid_argument("unknown column '" + column + "'");
}

int resolve_threads(const ExperimentConfig& cfg, int override_threads) {
  if (override_threads > 0) return override_threads;
  if (cfg.threads > 0) return cfg.threads;
  if (const char* env = std::getenv("QARSIM_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0 && v <= 4096) return static_cast<int>(v);
  }
  return 1;
}

ModelSpec model_spec(const ExperimentConfig& cfg) {
  return cfg.kind == ModelKind::Single ? single_cavity_spec(cfg.single) : crossed_spec(cfg.crossed);
}

void memory_preflight(const ModelSpec& spec, const SteadyStateOptions& options) {
  // Triplets (16-byte value + two indices) plus the compressed matrix.
  const double bytes = spec.estimated_nonzeros() * (24.0 + 20.0);
  if (bytes > options.memory_budget_bytes)
    throw MemoryBudgetError("generator assembly needs about " + format_number(bytes / (1ull << 30)) +
                                " GiB",
                            bytes, options.memory_budget_bytes);
}

DenseMat thermal_product_state(const CompositeSpace& space, const std::vector<double>& means) {
  if (means.size() != space.factors().size())
    throw std::invalid_argument("thermal_product_state: one mean per factor");
  Eigen::VectorXd diag = Eigen::VectorXd::Ones(1);
  for (std::size_t k = 0; k < means.size(); ++k) {
    const auto& f = space.factors()[k];
    const int d = f.dimension();
    Eigen::VectorXd p = Eigen::VectorXd::Zero(d);
    if (f.kind == FactorKind::TwoLevel || means[k] <= 0.0) {
      p(0) = 1.0;
    } else {
      const double q = means[k] / (1.0 + means[k]);
      double w = 1.0;
      for (int n = 0; n < d; ++n, w *= q) p(n) = w;
      p /= p.sum();
    }
    Eigen::VectorXd next(diag.size() * d);
    for (Eigen::Index i = 0; i < diag.size(); ++i) next.segment(i * d, d) = diag(i) * p;
    diag.swap(next);
  }
  DenseMat rho = DenseMat::Zero(space.dim(), space.dim());
  rho.diagonal() = diag.cast<cplx>();
  return rho;
}

namespace {

std::string axis_value_text(const std::string& path, double v) {
  if (const auto& schema = config_schema(); true)
    for (const auto& s : schema)
      if (s.key == path && s.kind == KeyKind::Integer)
        return std::to_string(std::llround(v));
  return format_number(v);
}

void fill_row(SteadyRow& row, const ExperimentConfig& cfg) {
  const auto& cols = steady_columns();
  row.values.assign(cols.size(), std::nullopt);
  auto put = [&](const std::string& c, double v) {
    for (std::size_t i = 0; i < cols.size(); ++i)
      if (cols[i] == c) row.values[i] = v;
  };

  const ModelSpec spec = model_spec(cfg);
  row.warnings = spec.warnings;
  memory_preflight(spec, cfg.solver);
  const Model model = assemble(spec);
  const SteadyStateResult res = steady_state(model.generator, cfg.solver);

  for (const auto& [name, op] : model.observables) put(name, expectation(res.rho, op).real());
  const auto flows = reservoir_flows(model, res.rho);
  double qa = std::numeric_limits<double>::quiet_NaN(), qb = qa;
  for (const auto& f : flows) {
    put("q_" + f.name + "_w", f.power);
    if (!std::isnan(f.quanta_rate) && f.name != "sigma") put("j_" + f.name + "_qps", f.quanta_rate);
    if (f.name == "a") qa = f.power;
    if (f.name == "b") qb = f.power;
  }
  if (qb != 0.0 && !std::isnan(qb)) put("cop", qa / qb);
  put("first_law_rel", first_law_residual(flows));
  put("residual", res.residual);
  put("residual_rel", res.relative_residual);
  put("trace_defect", res.trace_defect);
  put("hermiticity_defect", res.hermiticity_defect);
  put("min_eigenvalue", res.min_eigenvalue);
  put("clipped_weight", res.clipped_weight);
  row.method = to_string(res.method);
  row.reduced_size = res.reduced_size;
  row.degenerate = res.degenerate;

  if (cfg.kind == ModelKind::Crossed) {
    const auto& p = cfg.crossed;
    const double k = effective_coupling(p).k_limit;
    put("k_limit_rad_s", k);
    if (p.kappa_b + p.kappa_c > 0.0) {
      const double g = cooling_rate(p);
      put("cooling_rate_per_s", g);
      if (g > 0.0) put("n_inf_analytic", p.lambda / g);
    }
    row.regime_pass = regime_diagnostics(p, cfg.thresholds).all_pass();
  }
}

SteadyRow evaluate_point(const RawConfig& raw, int index, const std::vector<double>& axis) {
  SteadyRow row;
  row.index = index;
  row.axis = axis;
  const auto t0 = Clock::now();
  try {
    const ExperimentConfig cfg = resolve(raw);
    fill_row(row, cfg);
  } catch (const ConfigError& e) {
    row.failure = SteadyRow::Failure::Config;
    row.error = e.what();
  } catch (const MemoryBudgetError& e) {
    row.failure = SteadyRow::Failure::Memory;
    row.error = e.what();
  } catch (const std::exception& e) {
    row.failure = SteadyRow::Failure::Solver;
    row.error = e.what();
  }
  if (row.failure != SteadyRow::Failure::None) row.values.assign(steady_columns().size(), std::nullopt);
  row.wall_seconds = seconds_since(t0);
  return row;
}

}  // namespace

SweepResult run_sweep(const RawConfig& raw, int threads) {
  const auto t0 = Clock::now();
  SweepResult out;
  out.config = resolve(raw);
  out.threads = resolve_threads(out.config, threads);
  for (const auto& ax : out.config.axes) out.axis_paths.push_back(ax.path);

  // Grid in row-major order: the last axis varies fastest.
  std::vector<std::vector<double>> axis_values;
  std::size_t total = 1;
  for (const auto& ax : out.config.axes) {
    axis_values.push_back(ax.values());
    total *= axis_values.back().size();
  }
  std::vector<std::vector<double>> points(total);
  for (std::size_t i = 0; i < total; ++i) {
    std::size_t rem = i;
    std::vector<double> pt(axis_values.size());
    for (std::size_t k = axis_values.size(); k-- > 0;) {
      pt[k] = axis_values[k][rem % axis_values[k].size()];
      rem /= axis_values[k].size();
    }
    points[i] = std::move(pt);
  }

  out.rows.resize(total);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < total; i = next++) {
      RawConfig point = raw;
      for (std::size_t k = 0; k < points[i].size(); ++k)
        point.set(out.axis_paths[k], axis_value_text(out.axis_paths[k], points[i][k]));
      out.rows[i] = evaluate_point(point, static_cast<int>(i), points[i]);
    }
  };
  const int n = std::min<int>(out.threads, static_cast<int>(total));
  if (n <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  out.wall_seconds = seconds_since(t0);
  return out;
}

SweepResult run_steady(const RawConfig& raw, int threads) {
  RawConfig base = raw;
  for (auto it = base.entries.begin(); it != base.entries.end();)
    it = it->first.rfind("sweep.", 0) == 0 ? base.entries.erase(it) : std::next(it);
  return run_sweep(base, threads);
}

namespace {

std::vector<double> initial_means(const ExperimentConfig& cfg, const CompositeSpace& space) {
  std::vector<double> means;
  for (const auto& f : space.factors()) {
    if (f.label == "a") means.push_back(cfg.evolve.n_a);
    else if (f.label == "b") means.push_back(cfg.evolve.n_b);
    else if (f.label == "c") means.push_back(cfg.evolve.n_c);
    else means.push_back(0.0);
  }
  return means;
}

double horizon(const ExperimentConfig& cfg) {
  if (cfg.evolve.t_end) return *cfg.evolve.t_end;
  if (cfg.kind != ModelKind::Crossed)
    throw ConfigError("evolve.t_end_s is required for the single-cavity model", 0, "evolve.t_end_s");
  const double g = cooling_rate(cfg.crossed);
  if (!(g > 0.0))
    throw ConfigError("analytic cooling rate vanishes; set evolve.t_end_s", 0, "evolve.t_end_s");
  return cfg.evolve.relaxation_times / g;
}

Trajectory run_trajectory(const ExperimentConfig& cfg, const Model& model, double t_end) {
  std::vector<double> grid(static_cast<std::size_t>(cfg.evolve.points));
  for (int i = 0; i < cfg.evolve.points; ++i)
    grid[static_cast<std::size_t>(i)] = t_end * i / (cfg.evolve.points - 1);
  grid.back() = t_end;
  EvolveOptions eo;
  eo.rtol = cfg.evolve.rtol;
  eo.atol = cfg.evolve.atol;
  const DenseMat rho0 = thermal_product_state(*model.space, initial_means(cfg, *model.space));
  return evolve(model.generator, rho0, grid, model.observables, eo);
}

}  // namespace

EvolveResult run_evolve(const RawConfig& raw) {
  const auto t0 = Clock::now();
  EvolveResult out;
  out.config = resolve(raw);
  out.t_end = horizon(out.config);
  const ModelSpec spec = model_spec(out.config);
  memory_preflight(spec, out.config.solver);
  const Model model = assemble(spec);
  out.trajectory = run_trajectory(out.config, model, out.t_end);
  out.wall_seconds = seconds_since(t0);
  return out;
}

Report run_diagnose(const RawConfig& raw) {
  const auto t0 = Clock::now();
  Report out;
  out.config = resolve(raw);
  if (out.config.kind != ModelKind::Crossed)
    throw ConfigError("diagnose applies to the crossed-cavity model", 0, "model.kind");
  const auto& p = out.config.crossed;
  const RegimeReport rep = regime_diagnostics(p, out.config.thresholds);
  for (const auto& c : rep.conditions) out.rows.push_back({c.name, c.ratio, c.threshold, c.pass, c.description});
  const auto k = effective_coupling(p);
  out.rows.push_back({"k_full_rad_s", k.k_full, {}, {}, ""});
  out.rows.push_back({"k_limit_rad_s", k.k_limit, {}, {}, ""});
  out.rows.push_back({"delta_e_rad_s", rep.delta_e, {}, {}, "largest shift coefficient"});
  out.rows.push_back({"nbar_b", p.nbar_b(), {}, {}, "hot light occupation"});
  out.rows.push_back({"cavity_b_occupation", p.cavity_b_occupation(), {}, {}, to_string(p.drive_b)});
  out.rows.push_back({"nbar_c", p.nbar_c(), {}, {}, ""});
  if (p.kappa_b + p.kappa_c > 0.0) {
    const double g = cooling_rate(p);
    out.rows.push_back({"cooling_rate_per_s", g, {}, {}, ""});
    if (g > 0.0) out.rows.push_back({"n_inf_analytic", p.lambda / g, {}, {}, ""});
  }
  const auto tv = virtual_temperature(p.nu, p.omega_b(), p.omega_c(), p.t_room, p.t_hot);
  out.rows.push_back({"virtual_temperature_k", tv.kelvin, {}, {}, to_string(tv.mode)});
  out.rows.push_back({"cop", coefficient_of_performance(p.nu, p.omega_b()), {}, {}, ""});
  out.wall_seconds = seconds_since(t0);
  return out;
}

Report run_compare(const RawConfig& raw) {
  const auto t0 = Clock::now();
  Report out;
  out.config = resolve(raw);
  if (out.config.kind != ModelKind::Crossed)
    throw ConfigError("compare applies to the crossed-cavity model", 0, "model.kind");
  const auto& base = out.config.crossed;
  const double gamma = base.kappa_b + base.kappa_c > 0.0 ? cooling_rate(base) : 0.0;
  const double n_inf = gamma > 0.0 ? base.lambda / gamma : std::numeric_limits<double>::quiet_NaN();
  out.rows.push_back({"gamma.analytic", gamma, {}, {}, "2 k^2 n_b / (kappa_b + kappa_c)"});
  out.rows.push_back({"n_a.analytic", n_inf, {}, {}, "lambda / gamma"});

  std::vector<CrossedTier> tiers = {CrossedTier::EffectiveFull, CrossedTier::EffectiveLargeDelta};
  if (out.config.compare.include_full) tiers.insert(tiers.begin(), CrossedTier::FullWithAtom);
  double n_full = std::numeric_limits<double>::quiet_NaN(), n_eff = n_full;
  for (auto tier : tiers) {
    CrossedCavityParams p = base;
    p.tier = tier;
    const ModelSpec spec = crossed_spec(p);
    memory_preflight(spec, out.config.solver);
    const Model model = assemble(spec);
    const auto res = steady_state(model.generator, out.config.solver);
    const std::string t = to_string(tier);
    const double na = expectation(res.rho, model.observable("n_a")).real();
    if (tier == CrossedTier::FullWithAtom) n_full = na;
    if (tier == CrossedTier::EffectiveFull) n_eff = na;
    out.rows.push_back({"n_a." + t, na, {}, {}, ""});
    out.rows.push_back({"n_b." + t, expectation(res.rho, model.observable("n_b")).real(), {}, {}, ""});
    out.rows.push_back({"n_c." + t, expectation(res.rho, model.observable("n_c")).real(), {}, {}, ""});
    out.rows.push_back({"residual_rel." + t, res.relative_residual, 1e-10, res.relative_residual <= 1e-10, ""});
    if (gamma > 0.0 && tier == base.tier) {
      const double err = std::abs(na / n_inf - 1.0);
      out.rows.push_back({"n_a_vs_analytic." + t, err, 0.10, err <= 0.10, "relative deviation"});
    }
  }
  if (out.config.compare.include_full) {
    const double err = std::abs(n_full / n_eff - 1.0);
    out.rows.push_back({"n_a_full_vs_effective", err, 0.15, err <= 0.15, "relative deviation"});
  }
  if (gamma > 0.0) {
    const auto res = steady_state(appendix_b_generator(base), out.config.solver);
    auto space = CompositeSpace::make({SubsystemSpec::boson("a", base.d_phonon)});
    out.rows.push_back({"n_a.appendix_b", expectation(res.rho, number_operator(space, "a")).real(), {}, {}, ""});
  }
  if (out.config.compare.fit && gamma > 0.0) {
    const Model model = assemble(crossed_spec(base));
    const Trajectory tr = run_trajectory(out.config, model, horizon(out.config));
    const auto fit = fit_relaxation(tr.times, tr.tracks.at("n_a"));
    const double err = std::abs(fit.gamma / gamma - 1.0);
    out.rows.push_back({"gamma.fit", fit.gamma, {}, {}, to_string(base.tier)});
    out.rows.push_back({"gamma_fit_vs_analytic", err, 0.15, err <= 0.15, "relative deviation"});
    out.rows.push_back({"n_inf.fit", fit.n_inf, {}, {}, ""});
    out.rows.push_back({"fit_rms", fit.rms, {}, {}, ""});
  }
  const RegimeReport rep = regime_diagnostics(base, out.config.thresholds);
  out.rows.push_back({"regime.worst_margin", rep.worst_margin(), 1.0, rep.all_pass(), "max ratio/threshold"});
  out.wall_seconds = seconds_since(t0);
  return out;
}

}  // namespace qarsim::cli
