/* Copyright 2026 The eitsim Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#pragma once

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "json.hpp"

#include "eitsim/common.hpp"
#include "eitsim/hamiltonian.hpp"
#include "eitsim/hilbert.hpp"
#include "eitsim/observables.hpp"
#include "eitsim/propagate.hpp"
#include "eitsim/pulses.hpp"
#include "eitsim/transport.hpp"

namespace eitsim {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

// ---------------------------------------------------------------------------
// Config structs.  Values use experiment units (MHz before the 2*pi, us, ns,
// um) and are converted to angular frequencies when the Hamiltonian is built.
// ---------------------------------------------------------------------------

struct PhysicalConfig {
  double omega_p_mhz = 70.0;    // Raman peak Rabi frequency / 2*pi
  double omega_c_ratio = 2.5;   // EIT coupling as multiple of the Raman peak
  double delta_mhz = 1200.0;    // single-photon detuning / 2*pi
  double tau_r_us = 548.0;      // control Rydberg lifetime
  double tau_p_ns = 26.4;       // target P-level lifetime
  double c3_ghz_um3 = 14.25;    // control-target dipole-dipole coefficient
  double c6_ghz_um6 = 2036.0;   // target-target van der Waals coefficient
  bool decays = true;
};

struct GeometryConfig {
  std::string kind = "square";  // square | single | explicit
  double d_um = 60.0;
  double a_um = 5.0;
  std::vector<int> visit_order = {1, 3, 2, 4};
  std::vector<std::array<double, 2>> targets_um;       // explicit only
  std::vector<std::array<double, 2>> dwell_points_um;  // explicit only
};

struct ScheduleConfig {
  int num_targets = 4;
  int n_cycles = 1;  // repeated gates on one target; requires num_targets == 1
  double t_gap_us = 1.09;
  double t_r_us = 0.0166;
};

struct InitialConfig {
  std::string control = "superposition";  // "0" | "1" | "superposition"
  std::string targets = "A";              // one letter broadcast or length N
};

struct ObservablesConfig {
  std::vector<std::string> populations;
  bool ghz_fidelity = true;
  std::string ghz_orientation = "A";  // logical level kept by the blocked branch
  bool parity = false;
  std::vector<std::vector<int>> renyi2;
  std::vector<std::vector<int>> mutual_information;
  std::string entropy_convention = "logical";  // logical | full
};

struct IntegratorConfig {
  double tol = 1e-9;
  int sample_points = 2000;
};

struct OutputConfig {
  std::string directory = "out";
  std::vector<std::string> formats = {"csv"};
};

struct TruthTableConfig {
  std::vector<std::string> initials;  // "control:targets", e.g. "0:AAAA"
};

struct SweepConfig {
  std::string axis;  // avg_speed | dwell_distance_a | omega_p | subset_size | n_cycles
  std::vector<double> values;
};

struct ScenarioConfig {
  std::string name = "custom";
  PhysicalConfig physical;
  GeometryConfig geometry;
  ScheduleConfig schedule;
  InitialConfig initial;
  ObservablesConfig observables;
  IntegratorConfig integrator;
  OutputConfig output;
  std::optional<TruthTableConfig> truth_table;
  std::optional<SweepConfig> sweep;
};

// ---------------------------------------------------------------------------
// Strict JSON parsing: every key is checked off, unknown keys are errors with
// their full path, types are enforced by nlohmann's get<>.
// ---------------------------------------------------------------------------

namespace detail {

class StrictObject {
 public:
  StrictObject(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j.is_object()) throw ConfigError("expected an object at " + path_);
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key);
  }

  template <typename T>
  void load(const std::string& key, T& into) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    try {
      into = j_.at(key).get<T>();
    } catch (const Json::exception& e) {
      throw ConfigError("bad value for " + path_ + "." + key + ": " + e.what());
    }
  }

  const Json& child(const std::string& key) {
    seen_.insert(key);
    return j_.at(key);
  }

  void finish() const {
    for (const auto& [key, value] : j_.items())
      if (!seen_.count(key)) throw ConfigError("unknown key '" + key + "' at " + path_);
  }

  const std::string& path() const { return path_; }

 private:
  const Json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

}  // namespace detail

inline ScenarioConfig parse_scenario(const Json& j) {
  detail::StrictObject root(j, "$");
  int version = -1;
  root.load("schema_version", version);
  if (version != kSchemaVersion)
    throw ConfigError("schema_version must be " + std::to_string(kSchemaVersion));
  ScenarioConfig cfg;
  root.load("name", cfg.name);

  if (root.has("physical")) {
    detail::StrictObject o(root.child("physical"), "$.physical");
    o.load("omega_p_mhz", cfg.physical.omega_p_mhz);
    o.load("omega_c_ratio", cfg.physical.omega_c_ratio);
    o.load("delta_mhz", cfg.physical.delta_mhz);
    o.load("tau_r_us", cfg.physical.tau_r_us);
    o.load("tau_p_ns", cfg.physical.tau_p_ns);
    o.load("c3_ghz_um3", cfg.physical.c3_ghz_um3);
    o.load("c6_ghz_um6", cfg.physical.c6_ghz_um6);
    o.load("decays", cfg.physical.decays);
    o.finish();
  }
  if (root.has("geometry")) {
    detail::StrictObject o(root.child("geometry"), "$.geometry");
    o.load("kind", cfg.geometry.kind);
    o.load("d_um", cfg.geometry.d_um);
    o.load("a_um", cfg.geometry.a_um);
    o.load("visit_order", cfg.geometry.visit_order);
    o.load("targets_um", cfg.geometry.targets_um);
    o.load("dwell_points_um", cfg.geometry.dwell_points_um);
    o.finish();
  }
  if (root.has("schedule")) {
    detail::StrictObject o(root.child("schedule"), "$.schedule");
    o.load("num_targets", cfg.schedule.num_targets);
    o.load("n_cycles", cfg.schedule.n_cycles);
    o.load("t_gap_us", cfg.schedule.t_gap_us);
    o.load("t_r_us", cfg.schedule.t_r_us);
    o.finish();
  }
  if (root.has("initial")) {
    detail::StrictObject o(root.child("initial"), "$.initial");
    o.load("control", cfg.initial.control);
    o.load("targets", cfg.initial.targets);
    o.finish();
  }
  if (root.has("observables")) {
    detail::StrictObject o(root.child("observables"), "$.observables");
    o.load("populations", cfg.observables.populations);
    o.load("ghz_fidelity", cfg.observables.ghz_fidelity);
    o.load("ghz_orientation", cfg.observables.ghz_orientation);
    o.load("parity", cfg.observables.parity);
    o.load("renyi2", cfg.observables.renyi2);
    o.load("mutual_information", cfg.observables.mutual_information);
    o.load("entropy_convention", cfg.observables.entropy_convention);
    o.finish();
  }
  if (root.has("integrator")) {
    detail::StrictObject o(root.child("integrator"), "$.integrator");
    o.load("tol", cfg.integrator.tol);
    o.load("sample_points", cfg.integrator.sample_points);
    o.finish();
  }
  if (root.has("output")) {
    detail::StrictObject o(root.child("output"), "$.output");
    o.load("directory", cfg.output.directory);
    o.load("formats", cfg.output.formats);
    o.finish();
  }
  if (root.has("truth_table")) {
    detail::StrictObject o(root.child("truth_table"), "$.truth_table");
    TruthTableConfig tt;
    o.load("initials", tt.initials);
    o.finish();
    cfg.truth_table = std::move(tt);
  }
  if (root.has("sweep")) {
    detail::StrictObject o(root.child("sweep"), "$.sweep");
    SweepConfig sw;
    o.load("axis", sw.axis);
    o.load("values", sw.values);
    o.finish();
    cfg.sweep = std::move(sw);
  }
  root.finish();
  return cfg;
}

inline Json serialize_scenario(const ScenarioConfig& cfg) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["name"] = cfg.name;
  j["physical"] = {{"omega_p_mhz", cfg.physical.omega_p_mhz},
                   {"omega_c_ratio", cfg.physical.omega_c_ratio},
                   {"delta_mhz", cfg.physical.delta_mhz},
                   {"tau_r_us", cfg.physical.tau_r_us},
                   {"tau_p_ns", cfg.physical.tau_p_ns},
                   {"c3_ghz_um3", cfg.physical.c3_ghz_um3},
                   {"c6_ghz_um6", cfg.physical.c6_ghz_um6},
                   {"decays", cfg.physical.decays}};
  j["geometry"] = {{"kind", cfg.geometry.kind},
                   {"d_um", cfg.geometry.d_um},
                   {"a_um", cfg.geometry.a_um},
                   {"visit_order", cfg.geometry.visit_order},
                   {"targets_um", cfg.geometry.targets_um},
                   {"dwell_points_um", cfg.geometry.dwell_points_um}};
  j["schedule"] = {{"num_targets", cfg.schedule.num_targets},
                   {"n_cycles", cfg.schedule.n_cycles},
                   {"t_gap_us", cfg.schedule.t_gap_us},
                   {"t_r_us", cfg.schedule.t_r_us}};
  j["initial"] = {{"control", cfg.initial.control}, {"targets", cfg.initial.targets}};
  j["observables"] = {{"populations", cfg.observables.populations},
                      {"ghz_fidelity", cfg.observables.ghz_fidelity},
                      {"ghz_orientation", cfg.observables.ghz_orientation},
                      {"parity", cfg.observables.parity},
                      {"renyi2", cfg.observables.renyi2},
                      {"mutual_information", cfg.observables.mutual_information},
                      {"entropy_convention", cfg.observables.entropy_convention}};
  j["integrator"] = {{"tol", cfg.integrator.tol},
                     {"sample_points", cfg.integrator.sample_points}};
  j["output"] = {{"directory", cfg.output.directory}, {"formats", cfg.output.formats}};
  if (cfg.truth_table) j["truth_table"] = {{"initials", cfg.truth_table->initials}};
  if (cfg.sweep) j["sweep"] = {{"axis", cfg.sweep->axis}, {"values", cfg.sweep->values}};
  return j;
}

// ---------------------------------------------------------------------------
// Config -> simulation objects.
// ---------------------------------------------------------------------------

inline PhysicalParams build_physical(const PhysicalConfig& pc) {
  PhysicalParams p;
  p.omega_p_peak = angular_from_mhz(pc.omega_p_mhz);
  p.omega_c = pc.omega_c_ratio * p.omega_p_peak;
  p.delta = angular_from_mhz(pc.delta_mhz);
  if (pc.decays) {
    if (!(pc.tau_r_us > 0.0) || !(pc.tau_p_ns > 0.0))
      throw ConfigError("lifetimes must be positive when decays are on");
    p.gamma_r = 1.0 / pc.tau_r_us;
    p.gamma_p = 1.0 / (pc.tau_p_ns * 1e-3);
  } else {
    p.gamma_r = 0.0;
    p.gamma_p = 0.0;
  }
  p.c3 = angular_from_ghz(pc.c3_ghz_um3);
  p.c6 = angular_from_ghz(pc.c6_ghz_um6);
  p.validate();
  return p;
}

inline Geometry build_geometry(const GeometryConfig& gc, int num_targets) {
  if (gc.kind == "square") {
    if (num_targets != 4) throw ConfigError("square geometry serves exactly four targets");
    return build_square_geometry(gc.d_um, gc.a_um, gc.visit_order);
  }
  if (gc.kind == "single") {
    if (num_targets != 1) throw ConfigError("single geometry serves exactly one target");
    return build_single_geometry(gc.a_um);
  }
  if (gc.kind == "explicit") {
    if (static_cast<int>(gc.targets_um.size()) != num_targets)
      throw ConfigError("explicit geometry must list one position per target");
    if (gc.dwell_points_um.size() != gc.targets_um.size() && gc.dwell_points_um.size() != 1)
      throw ConfigError("explicit geometry needs one dwell point per gate window or a single one");
    Geometry g;
    for (const auto& p : gc.targets_um) g.targets.emplace_back(p[0], p[1]);
    for (const auto& p : gc.dwell_points_um) g.dwell_points.emplace_back(p[0], p[1]);
    g.validate();
    return g;
  }
  throw ConfigError("geometry kind must be square, single, or explicit");
}

inline TimingTable build_schedule(const ScenarioConfig& cfg) {
  const auto& sc = cfg.schedule;
  if (sc.num_targets < 1) throw ConfigError("need at least one target");
  if (sc.n_cycles < 1) throw ConfigError("cycle count must be positive");
  if (sc.num_targets > 1 && sc.n_cycles > 1)
    throw ConfigError("repeated cycles are a single-target protocol");
  const PhysicalParams p = build_physical(cfg.physical);
  const int windows = sc.num_targets > 1 ? sc.num_targets : sc.n_cycles;
  return build_timing(windows, sc.t_r_us, p.raman_duration(), sc.t_gap_us);
}

inline Hamiltonian build_hamiltonian(const ScenarioConfig& cfg) {
  const LevelScheme scheme{cfg.schedule.num_targets};
  return Hamiltonian(scheme, build_schedule(cfg), build_geometry(cfg.geometry, scheme.num_targets),
                     build_physical(cfg.physical));
}

inline ControlPreparation control_preparation_of(const std::string& s) {
  if (s == "0") return ControlPreparation::kG0;
  if (s == "1") return ControlPreparation::kG1;
  if (s == "superposition" || s == "+") return ControlPreparation::kSuperposition;
  throw ConfigError("control preparation must be 0, 1, or superposition");
}

inline std::vector<TargetLevel> target_levels_of(const std::string& s, int num_targets) {
  std::string expanded = s;
  if (expanded.size() == 1) expanded.assign(static_cast<std::size_t>(num_targets), s[0]);
  if (static_cast<int>(expanded.size()) != num_targets)
    throw ConfigError("target preparation must name one level per target");
  std::vector<TargetLevel> levels;
  for (char c : expanded) {
    if (c != 'A' && c != 'B') throw ConfigError("targets start in a logical level, A or B");
    levels.push_back(target_level_from_label(c));
  }
  return levels;
}

inline StateVector build_initial(const ScenarioConfig& cfg, const LevelScheme& scheme) {
  return prepare_initial(scheme, control_preparation_of(cfg.initial.control),
                         target_levels_of(cfg.initial.targets, scheme.num_targets));
}

// ---------------------------------------------------------------------------
// Scenario execution.
// ---------------------------------------------------------------------------

namespace detail {

inline std::string subset_key(const std::vector<int>& subset) {
  std::string s;
  for (std::size_t i = 0; i < subset.size(); ++i) {
    if (i) s += '.';
    s += std::to_string(subset[i]);
  }
  return s.empty() ? "none" : s;
}

inline EntropyConvention convention_of(const std::string& s) {
  if (s == "logical") return EntropyConvention::kLogical;
  if (s == "full") return EntropyConvention::kFull;
  throw ConfigError("entropy convention must be logical or full");
}

inline TargetLevel orientation_of(const std::string& s) {
  if (s == "A") return TargetLevel::kA;
  if (s == "B") return TargetLevel::kB;
  throw ConfigError("GHZ orientation must be A or B");
}

inline ObservableRecord make_record(const StateVector& psi, double t,
                                    const ObservablesConfig& oc) {
  ObservableRecord rec;
  rec.t = t;
  rec.populations = populations(psi, oc.populations);
  if (oc.ghz_fidelity) rec.fidelity = ghz_fidelity(psi, orientation_of(oc.ghz_orientation));
  if (oc.parity && psi.scheme.num_targets == 1) rec.parity = parity(psi);
  const EntropyConvention conv = convention_of(oc.entropy_convention);
  for (const auto& subset : oc.renyi2)
    rec.renyi2.emplace_back(subset_key(subset), renyi2(psi, subset, conv));
  for (const auto& subset : oc.mutual_information)
    rec.mutual_information.emplace_back(subset_key(subset),
                                        mutual_information(psi, subset, conv));
  rec.norm_deficit = norm_deficit(psi);
  return rec;
}

}  // namespace detail

struct ScenarioSummary {
  std::string name;
  std::optional<double> fidelity;
  std::optional<double> parity_value;
  std::vector<std::pair<std::string, double>> renyi2;
  std::vector<std::pair<std::string, double>> mutual_information;
  double norm_deficit = 0.0;
  double total_duration_us = 0.0;
  double wall_seconds = 0.0;
  EvolveStats stats;
};

struct ScenarioResult {
  ScenarioConfig config;
  std::vector<ObservableRecord> records;
  std::optional<TruthTable> truth;
  StateVector final_state;
  ScenarioSummary summary;
};

inline std::vector<std::pair<std::string, StateVector>> parse_truth_initials(
    const TruthTableConfig& tc, const ScenarioConfig& cfg, const LevelScheme& scheme) {
  std::vector<std::pair<std::string, StateVector>> initials;
  for (const auto& spec : tc.initials) {
    std::string control = spec, targets = cfg.initial.targets;
    const auto colon = spec.find(':');
    if (colon != std::string::npos) {
      control = spec.substr(0, colon);
      targets = spec.substr(colon + 1);
    }
    initials.emplace_back(spec,
                          prepare_initial(scheme, control_preparation_of(control),
                                          target_levels_of(targets, scheme.num_targets)));
  }
  return initials;
}

inline ScenarioResult run_scenario(const ScenarioConfig& cfg) {
  const auto t_start = std::chrono::steady_clock::now();
  const Hamiltonian ham = build_hamiltonian(cfg);
  const StateVector psi0 = build_initial(cfg, ham.scheme());

  EvolveOptions opts;
  opts.tol = cfg.integrator.tol;
  opts.sample_points = cfg.integrator.sample_points;
  const EvolveResult evo = evolve(psi0, ham, opts);

  ScenarioResult result;
  result.config = cfg;
  result.records.reserve(evo.times.size());
  for (std::size_t i = 0; i < evo.times.size(); ++i) {
    const StateVector psi(ham.scheme(), evo.states.col(static_cast<Eigen::Index>(i)));
    result.records.push_back(detail::make_record(psi, evo.times[i], cfg.observables));
  }
  if (cfg.truth_table) {
    EvolveOptions tt_opts = opts;
    result.truth =
        truth_table(parse_truth_initials(*cfg.truth_table, cfg, ham.scheme()), ham, tt_opts);
  }
  result.final_state = evo.final_state;

  ScenarioSummary& s = result.summary;
  s.name = cfg.name;
  const ObservableRecord last = detail::make_record(evo.final_state, ham.table().total_duration(),
                                                    cfg.observables);
  s.fidelity = last.fidelity;
  s.parity_value = last.parity;
  s.renyi2 = last.renyi2;
  s.mutual_information = last.mutual_information;
  s.norm_deficit = last.norm_deficit;
  s.total_duration_us = ham.table().total_duration();
  s.stats = evo.stats;
  s.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return result;
}

// ---------------------------------------------------------------------------
// Sweeps.
// ---------------------------------------------------------------------------

struct SweepRow {
  double axis_value = 0.0;
  bool ok = false;
  std::string error;
  std::optional<double> fidelity;
  std::optional<double> parity_value;
  std::vector<std::pair<std::string, double>> renyi2;
  std::vector<std::pair<std::string, double>> mutual_information;
  double norm_deficit = 0.0;
  double wall_seconds = 0.0;
};

struct SweepResult {
  std::string axis;
  std::vector<SweepRow> rows;
};

inline int default_worker_count() {
  if (const char* env = std::getenv("EITSIM_WORKERS")) {
    const int k = std::atoi(env);
    if (k >= 1) return k;
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? static_cast<int>(hc) : 1;
}

// Applies one axis value to a copy of the base config.
inline ScenarioConfig apply_axis(const ScenarioConfig& base, const std::string& axis,
                                 double value) {
  ScenarioConfig cfg = base;
  if (axis == "avg_speed") {
    if (cfg.geometry.kind != "square")
      throw ConfigError("avg_speed sweeps need the square geometry");
    if (!(value > 0.0)) throw ConfigError("average speed must be positive");
    const double hop = cfg.geometry.d_um * std::sqrt(2.0) - 2.0 * cfg.geometry.a_um;
    cfg.schedule.t_gap_us = hop / value;
  } else if (axis == "dwell_distance_a") {
    cfg.geometry.a_um = value;
  } else if (axis == "omega_p") {
    cfg.physical.omega_p_mhz = value;
  } else if (axis == "n_cycles") {
    const int n = static_cast<int>(std::lround(value));
    if (std::abs(value - n) > 1e-9 || n < 1) throw ConfigError("cycle counts must be integers");
    cfg.schedule.n_cycles = n;
  } else {
    throw ConfigError("unknown sweep axis '" + axis + "'");
  }
  return cfg;
}

inline SweepResult run_sweep(const ScenarioConfig& base, const SweepConfig& sweep,
                             int workers = default_worker_count()) {
  if (sweep.values.empty()) throw ConfigError("sweep needs at least one axis value");
  for (std::size_t i = 1; i < sweep.values.size(); ++i)
    if (!(sweep.values[i] > sweep.values[i - 1]))
      throw ConfigError("sweep axis values must be strictly increasing");

  SweepResult result;
  result.axis = sweep.axis;
  result.rows.resize(sweep.values.size());

  // The subset-size axis is post-processing on one evolved state: run the
  // base scenario once, then evaluate I(A:B) for A = control plus the first
  // k-1 targets at each requested size k.
  if (sweep.axis == "subset_size") {
    const auto t0 = std::chrono::steady_clock::now();
    const Hamiltonian ham = build_hamiltonian(base);
    const StateVector psi0 = build_initial(base, ham.scheme());
    EvolveOptions opts;
    opts.tol = base.integrator.tol;
    opts.sample_points = 2;
    const StateVector final_state = evolve(psi0, ham, opts).final_state;
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const EntropyConvention conv =
        detail::convention_of(base.observables.entropy_convention);
    const int parties = ham.scheme().num_targets + 1;
    for (std::size_t i = 0; i < sweep.values.size(); ++i) {
      SweepRow& row = result.rows[i];
      row.axis_value = sweep.values[i];
      try {
        const int size = static_cast<int>(std::lround(sweep.values[i]));
        if (std::abs(sweep.values[i] - size) > 1e-9 || size < 0 || size > parties)
          throw ConfigError("subset size must be an integer within the register");
        std::vector<int> subset_a;
        for (int p = 0; p < size; ++p) subset_a.push_back(p);
        row.mutual_information.emplace_back(detail::subset_key(subset_a),
                                            mutual_information(final_state, subset_a, conv));
        row.fidelity = ghz_fidelity(
            final_state, detail::orientation_of(base.observables.ghz_orientation));
        row.norm_deficit = norm_deficit(final_state);
        row.wall_seconds = i == 0 ? wall : 0.0;
        row.ok = true;
      } catch (const std::exception& e) {
        row.ok = false;
        row.error = e.what();
      }
    }
    return result;
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next.fetch_add(1); i < sweep.values.size(); i = next.fetch_add(1)) {
      SweepRow& row = result.rows[i];
      row.axis_value = sweep.values[i];
      try {
        ScenarioConfig cfg = apply_axis(base, sweep.axis, sweep.values[i]);
        cfg.truth_table.reset();  // sweeps track scalar observables only
        cfg.integrator.sample_points = 2;
        const ScenarioResult r = run_scenario(cfg);
        row.fidelity = r.summary.fidelity;
        row.parity_value = r.summary.parity_value;
        row.renyi2 = r.summary.renyi2;
        row.mutual_information = r.summary.mutual_information;
        row.norm_deficit = r.summary.norm_deficit;
        row.wall_seconds = r.summary.wall_seconds;
        row.ok = true;
      } catch (const std::exception& e) {
        row.ok = false;
        row.error = e.what();
      }
    }
  };
  const int k = std::max(1, std::min<int>(workers, static_cast<int>(sweep.values.size())));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(k - 1));
  for (int w = 1; w < k; ++w) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return result;
}

// ---------------------------------------------------------------------------
// Builtin scenarios, one per reproduced figure.
// ---------------------------------------------------------------------------

inline std::vector<std::string> builtin_names() {
  return {"fig2_cycles", "fig3_upper",    "fig3_lower",     "fig4_route",
          "fig5a_speed", "fig5b_distance", "fig6_mutualinfo"};
}

inline ScenarioConfig builtin_scenario(const std::string& name) {
  ScenarioConfig cfg;
  cfg.name = name;
  if (name == "fig2_cycles") {
    cfg.geometry.kind = "single";
    cfg.schedule.num_targets = 1;
    cfg.schedule.n_cycles = 1;
    cfg.initial.targets = "A";
    cfg.observables.populations = {"0A", "1A", "0B", "1B"};
    cfg.observables.parity = true;
    cfg.sweep = SweepConfig{"n_cycles", {1, 3, 5, 7, 9}};
    return cfg;
  }
  if (name == "fig3_upper" || name == "fig3_lower") {
    const bool upper = name == "fig3_upper";
    cfg.initial.targets = upper ? "A" : "B";
    cfg.observables.ghz_orientation = upper ? "A" : "B";
    cfg.observables.populations = upper ? std::vector<std::string>{"0AAAA", "1BBBB"}
                                        : std::vector<std::string>{"0BBBB", "1AAAA"};
    const std::string t = upper ? "AAAA" : "BBBB";
    cfg.truth_table = TruthTableConfig{{"0:" + t, "1:" + t, "superposition:" + t}};
    return cfg;
  }
  if (name == "fig4_route") {
    cfg.initial.control = "1";
    cfg.initial.targets = "A";
    cfg.observables.ghz_fidelity = false;
    cfg.observables.populations = {"1AAAA", "1BAAA", "1BBAA", "1BBBA", "1BBBB"};
    return cfg;
  }
  if (name == "fig5a_speed") {
    cfg.observables.renyi2 = {{0, 1, 2, 3, 4}};
    cfg.sweep = SweepConfig{"avg_speed", {10, 20, 30, 40, 50, 60, 70, 80, 90, 100}};
    return cfg;
  }
  if (name == "fig5b_distance") {
    cfg.sweep = SweepConfig{"dwell_distance_a", {3, 4, 5, 6, 7, 8, 9, 10}};
    return cfg;
  }
  if (name == "fig6_mutualinfo") {
    cfg.observables.mutual_information = {{0}};
    cfg.sweep = SweepConfig{"subset_size", {0, 1, 2, 3, 4, 5}};
    return cfg;
  }
  throw ConfigError("unknown builtin scenario '" + name + "'");
}

}  // namespace eitsim
