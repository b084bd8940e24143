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

// Command-line front end: run scenarios/builtins, sweep parameters, validate
// configs.  Exit codes: 0 success, 2 configuration error, 3 numerical error.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "eitsim/eitsim.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

// A config argument is either a builtin scenario name or a JSON file path.
eitsim::ScenarioConfig load_config(const std::string& arg) {
  const auto names = eitsim::builtin_names();
  if (std::count(names.begin(), names.end(), arg)) return eitsim::builtin_scenario(arg);
  std::ifstream in(arg);
  if (!in) throw eitsim::ConfigError("cannot open config file '" + arg + "'");
  eitsim::Json j;
  try {
    j = eitsim::Json::parse(in);
  } catch (const eitsim::Json::exception& e) {
    throw eitsim::ConfigError("config '" + arg + "' is not valid JSON: " + e.what());
  }
  return eitsim::parse_scenario(j);
}

std::vector<std::string> split_csv_list(const std::string& s) {
  std::vector<std::string> items;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) items.push_back(item);
  return items;
}

void print_summary(const eitsim::ScenarioSummary& s) {
  std::printf("scenario %s: %.4f us simulated in %.2f s (%lld steps, %lld rejected)\n",
              s.name.c_str(), s.total_duration_us, s.wall_seconds,
              static_cast<long long>(s.stats.steps_accepted),
              static_cast<long long>(s.stats.steps_rejected));
  if (s.fidelity) std::printf("  fidelity          %.6f\n", *s.fidelity);
  if (s.parity_value) std::printf("  parity            %.6f\n", *s.parity_value);
  for (const auto& [key, value] : s.renyi2) std::printf("  S2[%s]            %.6f\n", key.c_str(), value);
  for (const auto& [key, value] : s.mutual_information)
    std::printf("  I[%s]             %.6f\n", key.c_str(), value);
  std::printf("  norm deficit      %.3e\n", s.norm_deficit);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"eitsim: pulse-level simulator of transport-sequenced EIT gates"};
  app.require_subcommand(1);

  std::string config_arg, out_dir = "out", formats_arg = "csv";
  std::optional<std::string> scenario_name;
  std::optional<double> tol_override;
  std::optional<int> workers_override;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--out", out_dir, "output directory");
    cmd->add_option("--format", formats_arg, "comma-separated: csv,json,svg");
    cmd->add_option("--tol", tol_override, "integrator tolerance override");
    cmd->add_option("--workers", workers_override, "sweep worker threads");
  };

  auto* run_cmd = app.add_subcommand("run", "run a scenario (config file or builtin name)");
  run_cmd->add_option("config", config_arg, "config file or builtin name")->required();
  run_cmd->add_option("--scenario", scenario_name,
                      "builtin base overlaid with the config file's settings");
  add_common(run_cmd);

  auto* sweep_cmd = app.add_subcommand("sweep", "run a parameter sweep");
  sweep_cmd->add_option("config", config_arg, "config file or builtin name")->required();
  std::string axis_arg;
  std::string values_arg;
  sweep_cmd->add_option("--axis", axis_arg, "sweep axis name");
  sweep_cmd->add_option("--values", values_arg, "comma-separated axis values");
  add_common(sweep_cmd);

  auto* list_cmd = app.add_subcommand("list-scenarios", "list builtin scenarios");

  auto* validate_cmd = app.add_subcommand("validate", "parse and validate a config");
  validate_cmd->add_option("config", config_arg, "config file or builtin name")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (list_cmd->parsed()) {
      for (const auto& name : eitsim::builtin_names()) std::printf("%s\n", name.c_str());
      return kExitOk;
    }

    eitsim::ScenarioConfig cfg = load_config(config_arg);
    if (scenario_name) {
      // Builtin base with the config file's explicit sections layered on top:
      // the file is re-parsed onto the builtin defaults.
      eitsim::ScenarioConfig base = eitsim::builtin_scenario(*scenario_name);
      std::ifstream in(config_arg);
      if (in) {
        eitsim::Json j = eitsim::Json::parse(in);
        eitsim::Json merged = eitsim::serialize_scenario(base);
        merged.merge_patch(j);
        cfg = eitsim::parse_scenario(merged);
      } else {
        cfg = base;
      }
    }
    if (tol_override) cfg.integrator.tol = *tol_override;
    const std::vector<std::string> formats = split_csv_list(formats_arg);

    if (validate_cmd->parsed()) {
      // Construction exercises every physical and geometric precondition.
      (void)eitsim::build_hamiltonian(cfg);
      (void)eitsim::build_initial(cfg, eitsim::LevelScheme{cfg.schedule.num_targets});
      std::printf("config ok: %s\n", cfg.name.c_str());
      return kExitOk;
    }

    if (run_cmd->parsed()) {
      const eitsim::ScenarioResult result = eitsim::run_scenario(cfg);
      auto written = eitsim::emit_scenario_outputs(result, out_dir, formats);
      print_summary(result.summary);
      if (cfg.sweep) {
        const eitsim::SweepResult sw = eitsim::run_sweep(
            cfg, *cfg.sweep, workers_override.value_or(eitsim::default_worker_count()));
        auto more = eitsim::emit_sweep_outputs(sw, cfg.name, out_dir, formats);
        written.insert(written.end(), more.begin(), more.end());
      }
      for (const auto& p : written) std::printf("wrote %s\n", p.string().c_str());
      return kExitOk;
    }

    if (sweep_cmd->parsed()) {
      eitsim::SweepConfig sw;
      if (!axis_arg.empty()) {
        sw.axis = axis_arg;
        for (const auto& v : split_csv_list(values_arg)) sw.values.push_back(std::stod(v));
      } else if (cfg.sweep) {
        sw = *cfg.sweep;
      } else {
        throw eitsim::ConfigError("no sweep axis: pass --axis/--values or a config with a sweep");
      }
      const eitsim::SweepResult result = eitsim::run_sweep(
          cfg, sw, workers_override.value_or(eitsim::default_worker_count()));
      auto written = eitsim::emit_sweep_outputs(result, cfg.name, out_dir, formats);
      int failures = 0;
      for (const auto& row : result.rows) {
        if (!row.ok) {
          ++failures;
          std::fprintf(stderr, "point %.17g failed: %s\n", row.axis_value, row.error.c_str());
        }
      }
      for (const auto& p : written) std::printf("wrote %s\n", p.string().c_str());
      std::printf("sweep %s: %zu points, %d failed\n", sw.axis.c_str(), result.rows.size(),
                  failures);
      return kExitOk;
    }
  } catch (const eitsim::ConfigError& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return kExitConfig;
  } catch (const eitsim::NumericalError& e) {
    std::fprintf(stderr, "numerical error: %s\n", e.what());
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  }
  return kExitOk;
}
