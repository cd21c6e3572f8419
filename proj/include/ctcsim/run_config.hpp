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

#ifndef CTCSIM_RUN_CONFIG_HPP
#define CTCSIM_RUN_CONFIG_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "ctcsim/scenarios.hpp"

namespace ctcsim {

/// Config document validation failure with a field-level message.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct RunOutcome {
  int exit_code = 0;
  std::string human_text;                 // printed to stdout by the CLI
  std::vector<std::string> files_written;
};

/// Builds a Scenario from a config document; throws ConfigError naming the
/// offending field.
Scenario scenario_from_config(const nlohmann::json& config);

/// Dispatches on config["experiment"]:
///   "fixed-point"        -> fixed_point_survey
///   "equiv"              -> equivalent-circuit run, rule picked by input
///   "prepared"           -> run_prepared_experiment
///   "entangled"          -> run_entangled_experiment
///   "compare-semantics"  -> semantics_compare
///   "ordering-check"     -> ordering_consistency_check
/// and writes the CSV/JSON files named in config["outputs"]. Output is
/// deterministic for a fixed config: rows are ordered by (lift rule, n) and
/// numbers are printed with 12 significant digits.
RunOutcome run_config(const nlohmann::json& config);

/// Formats a double with 12 significant digits, locale-independent.
std::string format_number(double v);

}  // namespace ctcsim

#endif
