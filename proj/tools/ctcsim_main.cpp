// Copyright 2026 The ctcsim Authors
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

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "ctcsim/run_config.hpp"

namespace {

using nlohmann::json;

struct CommonFlags {
  std::string config_path;
  std::string csv_path;
  std::string json_path;
  std::string unitary;
  std::string system_state;
  std::string entangled;
  std::string lift;
  std::string ordering;
  long long seed = -1;
  int n_max = 0;
};

void attach_common(CLI::App* cmd, CommonFlags* flags) {
  cmd->add_option("--config", flags->config_path, "config document (JSON)");
  cmd->add_option("--csv", flags->csv_path, "CSV output path");
  cmd->add_option("--json", flags->json_path, "JSON report path");
  cmd->add_option("--seed", flags->seed, "seed echoed into report provenance");
  cmd->add_option("--n-max", flags->n_max,
                  "replace n_list with powers of two up to this bound");
  cmd->add_option("--unitary", flags->unitary, "gate string for the interaction");
  cmd->add_option("--system-state", flags->system_state, "traveler state string");
  cmd->add_option("--entangled", flags->entangled, "two-register source state string");
  cmd->add_option("--lift", flags->lift, "lifting rule: prepared|density|both");
  cmd->add_option("--ordering", flags->ordering, "measurement ordering: before|after|both");
}

json build_config(const CommonFlags& flags, const std::string& experiment) {
  json config = json::object();
  if (!flags.config_path.empty()) {
    std::ifstream in(flags.config_path);
    if (!in) throw ctcsim::ConfigError("cannot open config file '" + flags.config_path + "'");
    try {
      in >> config;
    } catch (const json::parse_error& e) {
      throw ctcsim::ConfigError("config file '" + flags.config_path + "': " + e.what());
    }
    if (!config.is_object()) throw ctcsim::ConfigError("config document must be a JSON object");
  }
  // flags override the document
  if (!flags.unitary.empty()) config["unitary"] = flags.unitary;
  if (!flags.system_state.empty()) config["system_state"] = flags.system_state;
  if (!flags.entangled.empty()) config["entangled"] = flags.entangled;
  if (!flags.lift.empty()) config["lift"] = flags.lift;
  if (!flags.ordering.empty()) config["ordering"] = flags.ordering;
  if (flags.seed >= 0) config["seed"] = flags.seed;
  if (flags.n_max > 0) {
    json ns = json::array();
    for (int n = 1; n <= flags.n_max; n *= 2) ns.push_back(n);
    config["n_list"] = ns;
  }
  if (!flags.csv_path.empty() || !flags.json_path.empty()) {
    json outputs = config.contains("outputs") ? config["outputs"] : json::object();
    if (!flags.csv_path.empty()) outputs["csv"] = flags.csv_path;
    if (!flags.json_path.empty()) outputs["json"] = flags.json_path;
    config["outputs"] = outputs;
  }
  if (!experiment.empty()) {
    config["experiment"] = experiment;
  } else if (!config.contains("experiment")) {
    // the generic `experiment` subcommand: pick by input type
    config["experiment"] = config.contains("entangled") ? "entangled" : "prepared";
  }
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deutsch closed-timelike-curve simulator (equivalent-circuit formalism)"};
  app.require_subcommand(1);

  CommonFlags fp_flags, eq_flags, ex_flags, cs_flags, oc_flags;
  CLI::App* fixed_point = app.add_subcommand(
      "fixed-point", "survey the consistency-condition solutions of one interaction");
  attach_common(fixed_point, &fp_flags);
  CLI::App* equiv = app.add_subcommand(
      "equiv", "evaluate the equivalent circuit over a list of chain lengths");
  attach_common(equiv, &eq_flags);
  CLI::App* experiment = app.add_subcommand(
      "experiment", "run a prepared-ensemble or entangled-source scenario");
  attach_common(experiment, &ex_flags);
  CLI::App* compare = app.add_subcommand(
      "compare-semantics", "shot-by-shot vs whole-ensemble consistency trace");
  attach_common(compare, &cs_flags);
  CLI::App* ordering = app.add_subcommand(
      "ordering-check", "measurement-ordering invariance and the prepared-rule contrast");
  attach_common(ordering, &oc_flags);

  CLI11_PARSE(app, argc, argv);

  try {
    json config;
    if (fixed_point->parsed()) config = build_config(fp_flags, "fixed-point");
    if (equiv->parsed()) config = build_config(eq_flags, "equiv");
    if (experiment->parsed()) config = build_config(ex_flags, "");
    if (compare->parsed()) config = build_config(cs_flags, "compare-semantics");
    if (ordering->parsed()) config = build_config(oc_flags, "ordering-check");

    const ctcsim::RunOutcome outcome = ctcsim::run_config(config);
    std::cout << outcome.human_text;
    for (const auto& path : outcome.files_written) {
      std::cout << "wrote " << path << "\n";
    }
    return outcome.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
