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
#include "qarsim/output.hpp"

#include <cmath>

#include "json.hpp"

namespace qarsim::cli {

namespace {

using nlohmann::json;

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return format_number(v);
}

std::string num(const std::optional<double>& v) { return v ? num(*v) : std::string(); }

void provenance(std::ostream& os, const ExperimentConfig& cfg, const std::string& verb, int threads) {
  os << "# qarsim " << verb << "\r\n";
  os << "# source = " << cfg.source << "\r\n";
  for (const auto& [k, v] : cfg.resolved) os << "# " << k << " = " << v << "\r\n";
  if (threads > 0) os << "# threads = " << threads << "\r\n";
}

void join(std::ostream& os, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) os << (i ? "," : "") << csv_field(fields[i]);
  os << "\r\n";
}

const char* failure_name(SteadyRow::Failure f) {
  switch (f) {
    case SteadyRow::Failure::None: return "";
    case SteadyRow::Failure::Config: return "config";
    case SteadyRow::Failure::Solver: return "solver";
    case SteadyRow::Failure::Memory: return "memory";
  }
  return "";
}

std::string joined(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& w : v) s += (s.empty() ? "" : "; ") + w;
  return s;
}

json jnum(const std::optional<double>& v) {
  if (!v || !std::isfinite(*v)) return nullptr;
  return *v;
}

json config_json(const ExperimentConfig& cfg) {
  json j = json::object();
  for (const auto& [k, v] : cfg.resolved) j[k] = v;
  return j;
}

}  // namespace

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void write_csv(std::ostream& os, const SweepResult& r, const std::string& verb) {
  provenance(os, r.config, verb, r.threads);
  std::vector<std::string> head = {"index"};
  head.insert(head.end(), r.axis_paths.begin(), r.axis_paths.end());
  for (const auto& c : steady_columns()) head.push_back(c);
  for (const char* c : {"method", "reduced_size", "degenerate", "regime_pass", "status", "warnings", "error"})
    head.emplace_back(c);
  join(os, head);
  for (const auto& row : r.rows) {
    std::vector<std::string> f = {std::to_string(row.index)};
    for (double a : row.axis) f.push_back(num(a));
    for (const auto& v : row.values) f.push_back(num(v));
    f.push_back(row.method);
    f.push_back(row.failure == SteadyRow::Failure::None ? std::to_string(row.reduced_size) : "");
    f.push_back(row.failure == SteadyRow::Failure::None ? (row.degenerate ? "1" : "0") : "");
    f.push_back(row.regime_pass ? (*row.regime_pass ? "1" : "0") : "");
    f.push_back(row.failure == SteadyRow::Failure::None ? "ok" : failure_name(row.failure));
    f.push_back(joined(row.warnings));
    f.push_back(row.error);
    join(os, f);
  }
}

void write_csv(std::ostream& os, const EvolveResult& r) {
  provenance(os, r.config, "evolve", 0);
  const auto& tr = r.trajectory;
  std::vector<std::string> head = {"t_s"};
  for (const auto& [name, _] : tr.tracks) head.push_back(name);
  head.emplace_back("trace");
  join(os, head);
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    std::vector<std::string> f = {num(tr.times[i])};
    for (const auto& [_, v] : tr.tracks) f.push_back(num(v[i]));
    f.push_back(num(tr.trace[i]));
    join(os, f);
  }
}

void write_csv(std::ostream& os, const Report& r, const std::string& verb) {
  provenance(os, r.config, verb, 0);
  join(os, {"item", "value", "threshold", "pass", "note"});
  for (const auto& row : r.rows)
    join(os, {row.item, num(row.value), num(row.threshold),
              row.pass ? (*row.pass ? "1" : "0") : "", row.note});
}

void write_json(std::ostream& os, const SweepResult& r, const std::string& verb) {
  json j;
  j["verb"] = verb;
  j["config"] = config_json(r.config);
  j["threads"] = r.threads;
  j["wall_seconds"] = r.wall_seconds;
  j["axes"] = r.axis_paths;
  json rows = json::array();
  std::size_t failed = 0;
  for (const auto& row : r.rows) {
    json jr;
    jr["index"] = row.index;
    jr["axis"] = row.axis;
    const auto& cols = steady_columns();
    for (std::size_t i = 0; i < cols.size() && i < row.values.size(); ++i) jr[cols[i]] = jnum(row.values[i]);
    jr["method"] = row.method;
    jr["reduced_size"] = row.reduced_size;
    jr["degenerate"] = row.degenerate;
    jr["regime_pass"] = row.regime_pass ? json(*row.regime_pass) : json(nullptr);
    jr["status"] = row.failure == SteadyRow::Failure::None ? "ok" : failure_name(row.failure);
    jr["warnings"] = row.warnings;
    jr["error"] = row.error;
    jr["wall_seconds"] = row.wall_seconds;
    if (row.failure != SteadyRow::Failure::None) ++failed;
    rows.push_back(std::move(jr));
  }
  j["rows"] = std::move(rows);
  j["failed_points"] = failed;
  os << j.dump(2) << "\n";
}

void write_json(std::ostream& os, const EvolveResult& r) {
  json j;
  j["verb"] = "evolve";
  j["config"] = config_json(r.config);
  j["wall_seconds"] = r.wall_seconds;
  j["t_end_s"] = r.t_end;
  const auto& tr = r.trajectory;
  j["times"] = tr.times;
  j["tracks"] = tr.tracks;
  j["trace"] = tr.trace;
  j["accepted_steps"] = tr.accepted_steps;
  j["rejected_steps"] = tr.rejected_steps;
  j["max_trace_drift"] = tr.max_trace_drift;
  os << j.dump(2) << "\n";
}

void write_json(std::ostream& os, const Report& r, const std::string& verb) {
  json j;
  j["verb"] = verb;
  j["config"] = config_json(r.config);
  j["wall_seconds"] = r.wall_seconds;
  json rows = json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"item", row.item},
                    {"value", jnum(row.value)},
                    {"threshold", jnum(row.threshold)},
                    {"pass", row.pass ? json(*row.pass) : json(nullptr)},
                    {"note", row.note}});
  j["rows"] = std::move(rows);
  os << j.dump(2) << "\n";
}

}  // namespace qarsim::cli
