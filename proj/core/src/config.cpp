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

#include "qarsim/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>

#include "qarsim/thermo.hpp"

namespace qarsim::cli {

std::string ConfigError::format(const std::string& what, int line, const std::string& key) {
  std::string out;
  if (line > 0) out += "line " + std::to_string(line) + ": ";
  if (!key.empty()) out += "'" + key + "': ";
  return out + what;
}

std::string format_number(double v) {
  if (v == 0.0) return "0";
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

bool valid_key(const std::string& k) {
  if (k.empty() || k.front() == '.' || k.back() == '.') return false;
  return std::all_of(k.begin(), k.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
  });
}

}  // namespace

RawConfig RawConfig::parse(std::string_view text, std::string source) {
  RawConfig cfg;
  cfg.source = std::move(source);
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ConfigError("expected 'key = value'", lineno);
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    if (!valid_key(key)) throw ConfigError("malformed key", lineno, key);
    if (value.empty()) throw ConfigError("missing value", lineno, key);
    if (cfg.entries.count(key))
      throw ConfigError("duplicate key (first on line " + std::to_string(cfg.entries[key].line) +
                            ")",
                        lineno, key);
    cfg.entries[key] = {value, lineno};
  }
  return cfg;
}

RawConfig RawConfig::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse(ss.str(), path);
}

void RawConfig::set(const std::string& key, std::string value) {
  entries[key] = {std::move(value), 0};
}

const std::vector<KeySpec>& config_schema() {
  using K = KeyKind;
  static const std::vector<KeySpec> schema = {
      {"run.name", K::Text, "qarsim", "label copied into outputs", {}},
      {"units", K::Choice, "si", "si: _hz keys are cyclic Hz, temperatures in K; natural: hbar = k_B = 1, _hz keys are angular", {"si", "natural"}},
      {"model.kind", K::Choice, "crossed", "which machine to build", {"single", "crossed"}},
      {"model.tier", K::Choice, "auto", "interaction tier; auto = lda_rwa (single) or effective_full (crossed)",
       {"auto", "full_sine", "lda_rwa", "three_body", "full_with_atom", "effective_full", "effective_large_delta"}},
      {"threads", K::Integer, "0", "sweep workers; 0 = QARSIM_THREADS or 1", {}},
      {"seed", K::Integer, "0", "seed for randomized checks", {}},

      {"model.single.nu_hz", K::Real, "5e6", "trap frequency", {}},
      {"model.single.epsilon_hz", K::Real, "8.1e14", "electronic splitting; cavity sits at epsilon - nu", {}},
      {"model.single.g_hz", K::Real, "5e6", "cavity coupling", {}},
      {"model.single.eta", K::Real, "0.05", "Lamb-Dicke parameter", {}},
      {"model.single.lambda_qps", K::Real, "0", "trap heating rate (quanta/s)", {}},
      {"model.single.kappa_hz", K::Real, "5e5", "cavity line width", {}},
      {"model.single.nbar_b", K::Real, "1e-3", "thermal photon number of the pump light", {}},
      {"model.single.nbar_a_inv", K::Real, "0", "inverse thermal phonon number", {}},
      {"model.single.nbar_sigma", K::Real, "0", "electronic thermal occupation", {}},
      {"model.single.gamma_hz", K::Real, "2e7", "spontaneous emission rate", {}},
      {"model.single.quadrature_points", K::Integer, "100", "recoil quadrature nodes", {}},
      {"model.single.quadrature", K::Choice, "gregory", "recoil quadrature weights", {"gregory", "trapezoid"}},
      {"model.single.d_phonon", K::Integer, "21", "phonon truncation", {}},
      {"model.single.d_photon", K::Integer, "4", "photon truncation", {}},

      {"model.crossed.nu_hz", K::Real, "5e6", "trap frequency", {}},
      {"model.crossed.epsilon_hz", K::Real, "8.1e14", "electronic splitting", {}},
      {"model.crossed.delta_hz", K::Real, "1e8", "detuning omega_c - epsilon", {}},
      {"model.crossed.g_hz", K::Real, "2.5e7", "coupling used for g_b and g_c when those are auto", {}},
      {"model.crossed.g_b_hz", K::Real, "auto", "cavity b coupling", {}, true},
      {"model.crossed.g_c_hz", K::Real, "auto", "cavity c coupling", {}, true},
      {"model.crossed.k_hz", K::Real, "auto", "three-body coupling; when set, g_b = g_c is solved from k = g_b g_c eta cos(delta_b) cos(delta_c) / Delta", {}, true},
      {"model.crossed.eta", K::Real, "0.041", "Lamb-Dicke parameter along cavity b", {}},
      {"model.crossed.d_b_m", K::Real, "0", "trap offset from the cavity b node (m, si units only)", {}},
      {"model.crossed.d_c_m", K::Real, "0", "trap offset from the cavity c node (m, si units only)", {}},
      {"model.crossed.delta_b", K::Real, "auto", "misalignment phase; auto = d_b * omega_b / c0", {}, true},
      {"model.crossed.delta_c", K::Real, "auto", "misalignment phase; auto = d_c * omega_c / c0", {}, true},
      {"model.crossed.kappa_hz", K::Real, "5e5", "line width used for kappa_b and kappa_c when those are auto", {}},
      {"model.crossed.kappa_b_hz", K::Real, "auto", "cavity b line width", {}, true},
      {"model.crossed.kappa_c_hz", K::Real, "auto", "cavity c line width", {}, true},
      {"model.crossed.lambda_qps", K::Real, "10", "trap heating rate (quanta/s)", {}},
      {"model.crossed.gamma_hz", K::Real, "2e7", "spontaneous emission rate", {}},
      {"model.crossed.t_h_k", K::Real, "5800", "hot bath temperature", {}},
      {"model.crossed.t_r_k", K::Real, "300", "room temperature", {}},
      {"model.crossed.nbar_a_inv", K::Real, "auto", "inverse thermal phonon number; auto = 1/nbar(nu, T_r)", {}, true},
      {"model.crossed.nbar_sigma", K::Real, "0", "electronic thermal occupation (full model)", {}},
      {"model.crossed.drive_b", K::Choice, "one_sided", "thermal light through one mirror or both", {"one_sided", "two_sided"}},
      {"model.crossed.compensate_shifts", K::Flag, "false", "detune the bare cavities by their Lamb shifts", {}},
      {"model.crossed.quadrature_points", K::Integer, "100", "recoil quadrature nodes (full model)", {}},
      {"model.crossed.quadrature", K::Choice, "gregory", "recoil quadrature weights", {"gregory", "trapezoid"}},
      {"model.crossed.d_phonon", K::Integer, "71", "phonon truncation", {}},
      {"model.crossed.d_photon_b", K::Integer, "4", "cavity b truncation", {}},
      {"model.crossed.d_photon_c", K::Integer, "4", "cavity c truncation", {}},
      {"model.ions.count", K::Integer, "0", "number of model.ions.N.* blocks (effective tiers)", {}},

      {"solver.method", K::Choice, "auto", "steady-state method", {"auto", "sparse_lu", "dense_lu", "inverse_iteration", "dense_eigen"}},
      {"solver.memory_budget_gib", K::Real, "8", "memory pre-flight budget", {}},
      {"solver.lu_fill_factor", K::Real, "30", "assumed sparse LU fill relative to the reduced system", {}},
      {"solver.positivity_floor", K::Real, "1e-8", "largest tolerated negative eigenvalue", {}},
      {"solver.reduce_sectors", K::Flag, "true", "solve only the symmetry sector holding the populations", {}},

      {"diagnose.much_less", K::Real, "0.1", "threshold for strong inequalities", {}},
      {"diagnose.lesssim", K::Real, "1", "threshold for the recoil condition", {}},

      {"evolve.t_end_s", K::Real, "auto", "evolution horizon; auto = relaxation_times / cooling rate", {}, true},
      {"evolve.relaxation_times", K::Real, "5", "horizon in units of the analytic relaxation time", {}},
      {"evolve.points", K::Integer, "101", "output samples including t = 0", {}},
      {"evolve.initial.n_a", K::Real, "0", "mean of the initial thermal phonon state", {}},
      {"evolve.initial.n_b", K::Real, "0", "mean of the initial thermal photon state (b)", {}},
      {"evolve.initial.n_c", K::Real, "0", "mean of the initial thermal photon state (c)", {}},
      {"evolve.rtol", K::Real, "1e-8", "relative tolerance", {}},
      {"evolve.atol", K::Real, "1e-12", "absolute tolerance", {}},

      {"compare.include_full", K::Flag, "false", "also solve the model with the atom retained", {}},
      {"compare.fit", K::Flag, "true", "fit the relaxation rate from a trajectory", {}},

      {"output.csv", K::Text, "", "CSV path when --out is absent", {}},
      {"output.json", K::Text, "", "optional JSON summary path", {}},
  };
  return schema;
}

namespace {

const KeySpec* find_spec(const std::string& key) {
  for (const auto& s : config_schema())
    if (s.key == key) return &s;
  return nullptr;
}

const std::vector<std::string> kIonFields = {"g_b_hz", "g_c_hz", "eta", "delta_b", "delta_c",
                                             "delta_hz"};
const std::vector<std::string> kSweepFields = {"path", "min", "max", "count", "scale"};

// Splits "prefix.N.field"; returns false if the shape does not match.
bool indexed(const std::string& key, const std::string& prefix, int& index, std::string& field) {
  if (key.rfind(prefix, 0) != 0) return false;
  const std::string rest = key.substr(prefix.size());
  const auto dot = rest.find('.');
  if (dot == std::string::npos || dot == 0) return false;
  const std::string num = rest.substr(0, dot);
  if (!std::all_of(num.begin(), num.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
    return false;
  index = std::stoi(num);
  field = rest.substr(dot + 1);
  return true;
}

class Reader {
 public:
  explicit Reader(const RawConfig& raw) : raw_(raw) {}

  std::string text(const std::string& key) {
    const KeySpec* s = find_spec(key);
    std::string v = s ? s->default_value : std::string();
    if (auto it = raw_.entries.find(key); it != raw_.entries.end()) v = it->second.value;
    if (s) record(key, v);
    return v;
  }

  int line(const std::string& key) const {
    auto it = raw_.entries.find(key);
    return it == raw_.entries.end() ? 0 : it->second.line;
  }

  bool is_auto(const std::string& key) {
    const KeySpec* s = find_spec(key);
    const std::string v = text(key);
    return v == "auto" && s && s->allow_auto;
  }

  double real(const std::string& key) { return parse_real(key, text(key)); }

  std::optional<double> real_or_auto(const std::string& key) {
    if (is_auto(key)) return std::nullopt;
    return real(key);
  }

  long long integer(const std::string& key) {
    const std::string v = text(key);
    long long out = 0;
    auto r = std::from_chars(v.data(), v.data() + v.size(), out);
    if (r.ec != std::errc() || r.ptr != v.data() + v.size())
      throw ConfigError("expected an integer, got '" + v + "'", line(key), key);
    return out;
  }

  std::string choice(const std::string& key) {
    const std::string v = text(key);
    const KeySpec* s = find_spec(key);
    if (s && std::find(s->choices.begin(), s->choices.end(), v) == s->choices.end()) {
      std::string opts;
      for (const auto& c : s->choices) opts += (opts.empty() ? "" : "|") + c;
      throw ConfigError("expected one of " + opts + ", got '" + v + "'", line(key), key);
    }
    return v;
  }

  bool flag(const std::string& key) {
    const std::string v = text(key);
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("expected true or false, got '" + v + "'", line(key), key);
  }

  double parse_real(const std::string& key, const std::string& v) const {
    double out = 0.0;
    auto r = std::from_chars(v.data(), v.data() + v.size(), out);
    if (r.ec != std::errc() || r.ptr != v.data() + v.size() || !std::isfinite(out))
      throw ConfigError("expected a finite number, got '" + v + "'", line(key), key);
    return out;
  }

  std::map<std::string, std::string>& seen() { return seen_; }

 private:
  void record(const std::string& key, const std::string& v) { seen_[key] = v; }
  const RawConfig& raw_;
  std::map<std::string, std::string> seen_;
};

}  // namespace

bool is_sweepable(const std::string& key) {
  const KeySpec* s = find_spec(key);
  if (s) return s->kind == KeyKind::Real || s->kind == KeyKind::Integer;
  int idx = 0;
  std::string field;
  return indexed(key, "model.ions.", idx, field) &&
         std::find(kIonFields.begin(), kIonFields.end(), field) != kIonFields.end();
}

std::vector<double> SweepAxis::values() const {
  std::vector<double> v;
  if (count == 1) return {min};
  for (int i = 0; i < count; ++i) {
    const double f = static_cast<double>(i) / (count - 1);
    v.push_back(log ? std::exp(std::log(min) + f * (std::log(max) - std::log(min)))
                    : min + f * (max - min));
  }
  // Snap to 12 significant digits so decades land on round values, then pin
  // the declared end points.
  for (double& x : v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    x = std::strtod(buf, nullptr);
  }
  v.front() = min;
  v.back() = max;
  return v;
}

ExperimentConfig resolve(const RawConfig& raw) {
  // Reject unknown keys first so typos surface with their line.
  int ion_count_hint = 0;
  for (const auto& [key, entry] : raw.entries) {
    if (find_spec(key)) continue;
    int idx = 0;
    std::string field;
    if (indexed(key, "sweep.", idx, field) &&
        std::find(kSweepFields.begin(), kSweepFields.end(), field) != kSweepFields.end())
      continue;
    if (indexed(key, "model.ions.", idx, field) &&
        std::find(kIonFields.begin(), kIonFields.end(), field) != kIonFields.end()) {
      ion_count_hint = std::max(ion_count_hint, idx + 1);
      continue;
    }
    throw ConfigError("unknown key", entry.line, key);
  }

  Reader r(raw);
  ExperimentConfig cfg;
  cfg.source = raw.source;
  cfg.name = r.text("run.name");
  cfg.natural_units = r.choice("units") == "natural";
  const Units units = cfg.natural_units ? Units::natural() : Units::si();
  const double two_pi = cfg.natural_units ? 1.0 : 2.0 * std::numbers::pi;
  auto freq = [&](const std::string& key) { return two_pi * r.real(key); };
  auto positive = [&](const std::string& key, double v) {
    if (!(v > 0.0)) throw ConfigError("must be positive", r.line(key), key);
    return v;
  };
  auto nonneg = [&](const std::string& key, double v) {
    if (!(v >= 0.0)) throw ConfigError("must be nonnegative", r.line(key), key);
    return v;
  };
  auto truncation = [&](const std::string& key) {
    const long long d = r.integer(key);
    if (d < 2 || d > 4096) throw ConfigError("truncation must be in [2, 4096]", r.line(key), key);
    return static_cast<int>(d);
  };

  cfg.kind = r.choice("model.kind") == "single" ? ModelKind::Single : ModelKind::Crossed;
  std::string tier = r.choice("model.tier");
  if (tier == "auto") tier = cfg.kind == ModelKind::Single ? "lda_rwa" : "effective_full";
  const long long threads = r.integer("threads");
  if (threads < 0) throw ConfigError("must be nonnegative", r.line("threads"), "threads");
  cfg.threads = static_cast<int>(threads);
  cfg.seed = r.integer("seed");

  std::vector<std::pair<std::string, double>> derived;

  if (cfg.kind == ModelKind::Single) {
    auto& p = cfg.single;
    const std::string b = "model.single.";
    p.units = units;
    p.nu = positive(b + "nu_hz", freq(b + "nu_hz"));
    p.epsilon = positive(b + "epsilon_hz", freq(b + "epsilon_hz"));
    if (!(p.epsilon > p.nu)) throw ConfigError("epsilon must exceed nu", r.line(b + "epsilon_hz"), b + "epsilon_hz");
    p.g = nonneg(b + "g_hz", freq(b + "g_hz"));
    p.eta = r.real(b + "eta");
    p.lambda = nonneg(b + "lambda_qps", r.real(b + "lambda_qps"));
    p.kappa = nonneg(b + "kappa_hz", freq(b + "kappa_hz"));
    p.nbar_b = nonneg(b + "nbar_b", r.real(b + "nbar_b"));
    p.nbar_a_inv = nonneg(b + "nbar_a_inv", r.real(b + "nbar_a_inv"));
    p.nbar_sigma = nonneg(b + "nbar_sigma", r.real(b + "nbar_sigma"));
    p.gamma_sp = nonneg(b + "gamma_hz", freq(b + "gamma_hz"));
    const long long q = r.integer(b + "quadrature_points");
    if (q < 2 || q > 100000) throw ConfigError("must be in [2, 100000]", r.line(b + "quadrature_points"), b + "quadrature_points");
    p.quadrature_points = static_cast<int>(q);
    p.quadrature = r.choice(b + "quadrature") == "trapezoid" ? QuadratureRule::Trapezoid : QuadratureRule::Gregory;
    p.d_phonon = truncation(b + "d_phonon");
    p.d_photon = truncation(b + "d_photon");
    if (tier == "full_sine") p.tier = SingleCavityTier::FullSine;
    else if (tier == "lda_rwa") p.tier = SingleCavityTier::LdaRwa;
    else if (tier == "three_body") p.tier = SingleCavityTier::ThreeBody;
    else throw ConfigError("tier '" + tier + "' does not apply to the single-cavity model", r.line("model.tier"), "model.tier");
    derived.emplace_back("omega_rad_s", p.omega());
    derived.emplace_back("cop", coefficient_of_performance(p.nu, p.omega()));
  } else {
    auto& p = cfg.crossed;
    const std::string b = "model.crossed.";
    p.units = units;
    p.nu = positive(b + "nu_hz", freq(b + "nu_hz"));
    p.epsilon = positive(b + "epsilon_hz", freq(b + "epsilon_hz"));
    p.detuning = freq(b + "delta_hz");
    p.eta = r.real(b + "eta");
    const double d_b = nonneg(b + "d_b_m", r.real(b + "d_b_m"));
    const double d_c = nonneg(b + "d_c_m", r.real(b + "d_c_m"));
    if (cfg.natural_units && (d_b != 0.0 || d_c != 0.0))
      throw ConfigError("distances need si units; give delta_b/delta_c instead", r.line(b + "d_b_m"), b + "d_b_m");
    p.delta_b = r.real_or_auto(b + "delta_b").value_or(misalignment_phase(d_b, p.omega_b()));
    p.delta_c = r.real_or_auto(b + "delta_c").value_or(misalignment_phase(d_c, p.omega_c()));
    const double g = nonneg(b + "g_hz", freq(b + "g_hz"));
    const auto gb = r.real_or_auto(b + "g_b_hz");
    const auto gc = r.real_or_auto(b + "g_c_hz");
    const auto k = r.real_or_auto(b + "k_hz");
    if (k) {
      if (gb || gc) throw ConfigError("k_hz conflicts with explicit g_b_hz/g_c_hz", r.line(b + "k_hz"), b + "k_hz");
      const double denom = p.eta * std::cos(p.delta_b) * std::cos(p.delta_c);
      const double kk = two_pi * *k;
      if (denom == 0.0 || kk * p.detuning / denom < 0.0)
        throw ConfigError("cannot solve g from k with this sign of eta, delta or detuning", r.line(b + "k_hz"), b + "k_hz");
      p.g_b = p.g_c = std::sqrt(kk * p.detuning / denom);
    } else {
      p.g_b = gb ? nonneg(b + "g_b_hz", two_pi * *gb) : g;
      p.g_c = gc ? nonneg(b + "g_c_hz", two_pi * *gc) : g;
    }
    const double kappa = nonneg(b + "kappa_hz", freq(b + "kappa_hz"));
    const auto kb = r.real_or_auto(b + "kappa_b_hz");
    const auto kc = r.real_or_auto(b + "kappa_c_hz");
    p.kappa_b = kb ? nonneg(b + "kappa_b_hz", two_pi * *kb) : kappa;
    p.kappa_c = kc ? nonneg(b + "kappa_c_hz", two_pi * *kc) : kappa;
    p.lambda = nonneg(b + "lambda_qps", r.real(b + "lambda_qps"));
    p.gamma_sp = nonneg(b + "gamma_hz", freq(b + "gamma_hz"));
    p.t_hot = positive(b + "t_h_k", r.real(b + "t_h_k"));
    p.t_room = positive(b + "t_r_k", r.real(b + "t_r_k"));
    if (auto na = r.real_or_auto(b + "nbar_a_inv")) p.nbar_a_inv = nonneg(b + "nbar_a_inv", *na);
    p.nbar_sigma = nonneg(b + "nbar_sigma", r.real(b + "nbar_sigma"));
    p.drive_b = r.choice(b + "drive_b") == "two_sided" ? CavityDrive::TwoSided : CavityDrive::OneSided;
    p.compensate_shifts = r.flag(b + "compensate_shifts");
    const long long q = r.integer(b + "quadrature_points");
    if (q < 2 || q > 100000) throw ConfigError("must be in [2, 100000]", r.line(b + "quadrature_points"), b + "quadrature_points");
    p.quadrature_points = static_cast<int>(q);
    p.quadrature = r.choice(b + "quadrature") == "trapezoid" ? QuadratureRule::Trapezoid : QuadratureRule::Gregory;
    p.d_phonon = truncation(b + "d_phonon");
    p.d_photon_b = truncation(b + "d_photon_b");
    p.d_photon_c = truncation(b + "d_photon_c");
    if (tier == "full_with_atom") p.tier = CrossedTier::FullWithAtom;
    else if (tier == "effective_full") p.tier = CrossedTier::EffectiveFull;
    else if (tier == "effective_large_delta") p.tier = CrossedTier::EffectiveLargeDelta;
    else throw ConfigError("tier '" + tier + "' does not apply to the crossed-cavity model", r.line("model.tier"), "model.tier");
    if (!(p.omega_b() > 0.0)) throw ConfigError("omega_b = epsilon + Delta - nu must be positive", r.line(b + "delta_hz"), b + "delta_hz");

    const long long ions = r.integer("model.ions.count");
    if (ions < 0 || ions > 1000) throw ConfigError("must be in [0, 1000]", r.line("model.ions.count"), "model.ions.count");
    if (ion_count_hint > ions)
      throw ConfigError("ion block index exceeds model.ions.count", 0, "model.ions." + std::to_string(ion_count_hint - 1));
    for (int i = 0; i < ions; ++i) {
      const std::string ib = "model.ions." + std::to_string(i) + ".";
      auto get = [&](const std::string& f, double fallback, double factor) {
        auto it = raw.entries.find(ib + f);
        const double v = it == raw.entries.end() ? fallback
                                                 : factor * r.parse_real(ib + f, it->second.value);
        r.seen()[ib + f] = it == raw.entries.end() ? "auto" : it->second.value;
        return v;
      };
      IonCoupling ion;
      ion.g_b = get("g_b_hz", p.g_b, two_pi);
      ion.g_c = get("g_c_hz", p.g_c, two_pi);
      ion.eta = get("eta", p.eta, 1.0);
      ion.delta_b = get("delta_b", p.delta_b, 1.0);
      ion.delta_c = get("delta_c", p.delta_c, 1.0);
      ion.detuning = get("delta_hz", p.detuning, two_pi);
      p.ions.push_back(ion);
    }
    try {
      p.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    derived.emplace_back("omega_b_rad_s", p.omega_b());
    derived.emplace_back("omega_c_rad_s", p.omega_c());
    derived.emplace_back("g_b_rad_s", p.g_b);
    derived.emplace_back("g_c_rad_s", p.g_c);
    derived.emplace_back("delta_b", p.delta_b);
    derived.emplace_back("delta_c", p.delta_c);
    derived.emplace_back("nbar_b", p.nbar_b());
    derived.emplace_back("nbar_c", p.nbar_c());
    derived.emplace_back("nbar_a_inv", p.resolved_nbar_a_inv());
  }

  auto& s = cfg.solver;
  s.method = steady_method_from_string(r.choice("solver.method"));
  s.memory_budget_bytes = positive("solver.memory_budget_gib", r.real("solver.memory_budget_gib")) * double(1ull << 30);
  s.lu_fill_factor = positive("solver.lu_fill_factor", r.real("solver.lu_fill_factor"));
  s.positivity_floor = nonneg("solver.positivity_floor", r.real("solver.positivity_floor"));
  s.reduce_sectors = r.flag("solver.reduce_sectors");
  cfg.thresholds.much_less = positive("diagnose.much_less", r.real("diagnose.much_less"));
  cfg.thresholds.lesssim = positive("diagnose.lesssim", r.real("diagnose.lesssim"));

  auto& e = cfg.evolve;
  if (auto t = r.real_or_auto("evolve.t_end_s")) e.t_end = positive("evolve.t_end_s", *t);
  e.relaxation_times = positive("evolve.relaxation_times", r.real("evolve.relaxation_times"));
  const long long pts = r.integer("evolve.points");
  if (pts < 2 || pts > 1000000) throw ConfigError("must be in [2, 1000000]", r.line("evolve.points"), "evolve.points");
  e.points = static_cast<int>(pts);
  e.n_a = nonneg("evolve.initial.n_a", r.real("evolve.initial.n_a"));
  e.n_b = nonneg("evolve.initial.n_b", r.real("evolve.initial.n_b"));
  e.n_c = nonneg("evolve.initial.n_c", r.real("evolve.initial.n_c"));
  e.rtol = positive("evolve.rtol", r.real("evolve.rtol"));
  e.atol = positive("evolve.atol", r.real("evolve.atol"));
  cfg.compare.include_full = r.flag("compare.include_full");
  cfg.compare.fit = r.flag("compare.fit");
  cfg.output_csv = r.text("output.csv");
  cfg.output_json = r.text("output.json");

  for (int i = 0;; ++i) {
    const std::string sb = "sweep." + std::to_string(i) + ".";
    if (!raw.entries.count(sb + "path")) {
      for (const auto& f : kSweepFields)
        if (auto it = raw.entries.find(sb + f); it != raw.entries.end())
          throw ConfigError("sweep axis without a path", it->second.line, sb + f);
      break;
    }
    SweepAxis ax;
    const auto& pe = raw.entries.at(sb + "path");
    ax.path = pe.value;
    if (!is_sweepable(ax.path)) throw ConfigError("not a numeric parameter path", pe.line, sb + "path");
    if (ax.path.rfind("model.ions.", 0) == 0 && ax.path != "model.ions.count") {
      int idx = 0;
      std::string field;
      indexed(ax.path, "model.ions.", idx, field);
      if (idx >= static_cast<int>(cfg.crossed.ions.size()))
        throw ConfigError("sweep path names a missing ion", pe.line, sb + "path");
    }
    auto need = [&](const std::string& f) -> const ConfigEntry& {
      auto it = raw.entries.find(sb + f);
      if (it == raw.entries.end()) throw ConfigError("sweep axis is missing '" + f + "'", pe.line, sb + f);
      return it->second;
    };
    ax.min = r.parse_real(sb + "min", need("min").value);
    ax.max = r.parse_real(sb + "max", need("max").value);
    const auto& ce = need("count");
    long long count = 0;
    auto res = std::from_chars(ce.value.data(), ce.value.data() + ce.value.size(), count);
    if (res.ec != std::errc() || res.ptr != ce.value.data() + ce.value.size() || count < 1 || count > 100000)
      throw ConfigError("count must be an integer in [1, 100000]", ce.line, sb + "count");
    ax.count = static_cast<int>(count);
    std::string scale = "linear";
    if (auto it = raw.entries.find(sb + "scale"); it != raw.entries.end()) scale = it->second.value;
    if (scale != "linear" && scale != "log")
      throw ConfigError("scale must be linear or log", raw.entries.at(sb + "scale").line, sb + "scale");
    ax.log = scale == "log";
    if (ax.log && !(ax.min > 0.0 && ax.max > 0.0))
      throw ConfigError("log axes need positive bounds", need("min").line, sb + "min");
    for (const auto& other : cfg.axes)
      if (other.path == ax.path) throw ConfigError("axis path repeated", pe.line, sb + "path");
    cfg.axes.push_back(ax);
    for (const auto& f : kSweepFields)
      r.seen()[sb + f] = f == "scale" ? scale : raw.entries.at(sb + f).value;
  }

  // Provenance: every schema key (defaults materialized) then indexed blocks.
  for (const auto& spec : config_schema()) cfg.resolved.emplace_back(spec.key, r.text(spec.key));
  for (const auto& [k, v] : r.seen())
    if (!find_spec(k)) cfg.resolved.emplace_back(k, v);
  for (const auto& [k, v] : derived) cfg.resolved.emplace_back("derived." + k, format_number(v));
  return cfg;
}

}  // namespace qarsim::cli
