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

#include "ctcsim/run_config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace ctcsim {

namespace {

using nlohmann::json;

std::string require_string(const json& config, const char* field) {
  if (!config.contains(field) || !config[field].is_string()) {
    throw ConfigError(std::string("config field '") + field + "' must be a string");
  }
  return config[field].get<std::string>();
}

LiftChoice parse_lift(const std::string& s) {
  if (s == "prepared") return LiftChoice::Prepared;
  if (s == "density") return LiftChoice::Density;
  if (s == "both") return LiftChoice::Both;
  throw ConfigError("config field 'lift' must be prepared|density|both, got '" + s + "'");
}

OrderingChoice parse_ordering(const std::string& s) {
  if (s == "before") return OrderingChoice::MeasureBeforeCTC;
  if (s == "after") return OrderingChoice::MeasureAfterCTC;
  if (s == "both") return OrderingChoice::Both;
  throw ConfigError("config field 'ordering' must be before|after|both, got '" + s + "'");
}

json matrix_to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) {
      row.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string format_matrix(const ComplexMatrix& m) {
  std::ostringstream os;
  char buf[64];
  for (std::size_t r = 0; r < m.rows(); ++r) {
    os << "    [";
    for (std::size_t c = 0; c < m.cols(); ++c) {
      std::snprintf(buf, sizeof buf, " %+.6f%+.6fi", m(r, c).real(), m(r, c).imag());
      os << buf;
    }
    os << " ]\n";
  }
  return os.str();
}

void write_file(const std::string& path, const std::string& content,
                std::vector<std::string>* files) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open output file '" + path + "'");
  out << content;
  if (!out.good()) throw ConfigError("write failed for '" + path + "'");
  files->push_back(path);
}

struct OutputPaths {
  std::optional<std::string> csv;
  std::optional<std::string> json_path;
};

OutputPaths parse_outputs(const json& config) {
  OutputPaths paths;
  if (!config.contains("outputs")) return paths;
  const json& outputs = config["outputs"];
  if (!outputs.is_object()) throw ConfigError("config field 'outputs' must be an object");
  if (outputs.contains("csv")) paths.csv = outputs["csv"].get<std::string>();
  if (outputs.contains("json")) paths.json_path = outputs["json"].get<std::string>();
  return paths;
}

constexpr const char* kCorrelationCsvHeader =
    "n,dist_to_deutsch,zz,mutual_info_bits,p00,p01,p10,p11,oscillation_flag";

std::string correlation_csv(const std::vector<CorrelationReport>& reports) {
  std::ostringstream os;
  os << kCorrelationCsvHeader << "\n";
  for (const auto& r : reports) {
    os << r.n << ',' << format_number(r.dist_to_deutsch) << ',' << format_number(r.zz) << ','
       << format_number(r.mutual_information_bits);
    for (double p : r.joint_distribution) os << ',' << format_number(p);
    os << ',' << (r.oscillation ? 1 : 0) << "\n";
  }
  return os.str();
}

json correlation_json(const std::vector<CorrelationReport>& reports) {
  json rows = json::array();
  for (const auto& r : reports) {
    rows.push_back(json{{"n", r.n},
                        {"dist_to_deutsch", r.dist_to_deutsch},
                        {"zz", r.zz},
                        {"mutual_info_bits", r.mutual_information_bits},
                        {"p00", r.joint_distribution[0]},
                        {"p01", r.joint_distribution[1]},
                        {"p10", r.joint_distribution[2]},
                        {"p11", r.joint_distribution[3]},
                        {"oscillation_flag", r.oscillation},
                        {"provenance", r.provenance}});
  }
  return rows;
}

std::string correlation_human(const std::string& title,
                              const std::vector<CorrelationReport>& reports) {
  std::ostringstream os;
  os << title << "\n";
  for (const auto& r : reports) {
    os << "  n=" << r.n << "  dist_to_deutsch=" << format_number(r.dist_to_deutsch)
       << "  zz=" << format_number(r.zz)
       << "  mi_bits=" << format_number(r.mutual_information_bits) << "  p=("
       << format_number(r.joint_distribution[0]) << ", " << format_number(r.joint_distribution[1])
       << ", " << format_number(r.joint_distribution[2]) << ", "
       << format_number(r.joint_distribution[3]) << ")"
       << (r.oscillation ? "  [oscillating rail]" : "") << "\n";
  }
  return os.str();
}

/// Mixture lift of a labeled ensemble under the Density rule: whole traveler
/// marginal copied, label mixture carried as an independent factor.
LiftedInput density_lift_of_ensemble(const std::vector<PreparedMember>& members) {
  for (const auto& m : members) {
    if (!m.reference.has_value()) {
      throw ConfigError("density-rule rows need reference labels on every ensemble member");
    }
  }
  const LiftedInput prepared = lift_prepared(members);
  ComplexMatrix trav = prepared.components[0].copy_state.matrix();
  trav *= Complex(prepared.components[0].weight, 0.0);
  ComplexMatrix ref = prepared.components[0].reference->matrix();
  ref *= Complex(prepared.components[0].weight, 0.0);
  for (std::size_t k = 1; k < prepared.components.size(); ++k) {
    ComplexMatrix t = prepared.components[k].copy_state.matrix();
    t *= Complex(prepared.components[k].weight, 0.0);
    trav += t;
    ComplexMatrix q = prepared.components[k].reference->matrix();
    q *= Complex(prepared.components[k].weight, 0.0);
    ref += q;
  }
  const std::size_t dt = trav.rows();
  const std::size_t dr = ref.rows();
  return lift_density(DensityMatrix(std::move(trav), {dt}), DensityMatrix(std::move(ref), {dr}));
}

std::vector<CorrelationReport> run_density_rule_rows(const Scenario& scenario,
                                                     const std::vector<PreparedMember>& members) {
  const Unitary u = build_gate(scenario.interaction);
  const LiftedInput lifted = density_lift_of_ensemble(members);
  const DensityMatrix target = deutsch_consistent_output(u, lifted);
  std::vector<CorrelationReport> rows;
  const std::vector<std::size_t> ns = scenario.n_list.empty()
                                          ? std::vector<std::size_t>{1, 2, 4, 8, 16, 32}
                                          : scenario.n_list;
  for (std::size_t n : ns) {
    EquivCircuitResult result = equiv_circuit_contracted(u, lifted, n);
    if (scenario.ref_rotation.has_value()) {
      result.output = apply_unitary(result.output, build_gate(*scenario.ref_rotation), {0});
    }
    if (scenario.out_rotation.has_value()) {
      result.output = apply_unitary(result.output, build_gate(*scenario.out_rotation), {1});
    }
    const CorrelationMetrics metrics = correlation_metrics(result.output);
    CorrelationReport row;
    row.n = n;
    row.zz = metrics.zz;
    row.mutual_information_bits = metrics.mutual_information_bits;
    row.joint_distribution = metrics.joint_probs;
    row.dist_to_deutsch = trace_distance(result.output, target);
    row.oscillation = result.oscillation;
    row.provenance = "experiment=equiv lift=density unitary=" + scenario.interaction +
                     " n=" + std::to_string(n) + " seed=" + std::to_string(scenario.seed);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<CorrelationReport> equiv_rows(const Scenario& scenario) {
  if (scenario.entangled.has_value()) {
    if (scenario.lift == LiftChoice::Both) {
      throw ConfigError(
          "lift=both is not defined for an entangled source; run ordering-check for the contrast");
    }
    Scenario s = scenario;
    if (s.lift != LiftChoice::Prepared) s.lift = LiftChoice::Density;
    return run_entangled_experiment(s);
  }
  if (!scenario.ensemble.empty()) {
    if (scenario.lift == LiftChoice::Density) {
      return run_density_rule_rows(scenario, parse_ensemble(scenario.ensemble));
    }
    std::vector<CorrelationReport> rows = run_prepared_experiment(scenario);
    if (scenario.lift == LiftChoice::Both) {
      std::vector<CorrelationReport> density_rows =
          run_density_rule_rows(scenario, parse_ensemble(scenario.ensemble));
      rows.insert(rows.end(), density_rows.begin(), density_rows.end());
    }
    return rows;
  }
  if (scenario.system_state.has_value()) {
    Scenario s = scenario;
    s.ensemble = {EnsembleMemberSpec{1.0, *scenario.system_state, std::string("0")}};
    return run_prepared_experiment(s);
  }
  throw ConfigError("equiv run needs one of: ensemble, entangled, system_state");
}

RunOutcome emit_correlation_outputs(const json& config, const std::string& title,
                                    const std::vector<CorrelationReport>& rows) {
  RunOutcome outcome;
  outcome.human_text = correlation_human(title, rows);
  const OutputPaths paths = parse_outputs(config);
  if (paths.csv.has_value()) write_file(*paths.csv, correlation_csv(rows), &outcome.files_written);
  if (paths.json_path.has_value()) {
    json doc{{"config", config}, {"results", correlation_json(rows)}};
    write_file(*paths.json_path, doc.dump(2) + "\n", &outcome.files_written);
  }
  return outcome;
}

RunOutcome run_fixed_point(const json& config, const Scenario& scenario) {
  if (!scenario.system_state.has_value()) {
    throw ConfigError("fixed-point run needs config field 'system_state'");
  }
  const SurveyReport survey = fixed_point_survey(scenario.interaction, *scenario.system_state);
  const FixedPointReport& fp = survey.fixed_points;

  std::ostringstream os;
  os << "fixed-point survey: unitary=" << survey.interaction
     << " system_state=" << survey.system_state << "\n";
  os << "  fixed-space dimension: " << fp.fixed_space_basis.size()
     << (fp.unique ? "  (unique solution)" : "  (multiple solutions)") << "\n";
  if (fp.rank_warning) {
    os << "  warning: a rank pivot fell within 10x of the threshold; dimension may be off\n";
  }
  os << "  canonical solution (limit selected by the unrolled chain):\n"
     << format_matrix(fp.canonical.matrix());
  os << "  residual |Phi(rho)-rho|_max = " << format_number(fp.residual) << "\n";
  if (fp.oscillation_detected) {
    os << "  plain iteration oscillates with period "
       << (fp.oscillation_period ? std::to_string(*fp.oscillation_period) : std::string("?"))
       << "; the canonical solution is the running-average (Cesaro) limit\n";
  } else {
    os << "  plain iteration settles; no oscillation detected\n";
  }

  RunOutcome outcome;
  outcome.human_text = os.str();
  const OutputPaths paths = parse_outputs(config);
  if (paths.csv.has_value()) {
    std::ostringstream csv;
    csv << "fixed_space_dimension,unique,residual,rank_warning,oscillation_flag,oscillation_period\n";
    csv << fp.fixed_space_basis.size() << ',' << (fp.unique ? 1 : 0) << ','
        << format_number(fp.residual) << ',' << (fp.rank_warning ? 1 : 0) << ','
        << (fp.oscillation_detected ? 1 : 0) << ','
        << (fp.oscillation_period ? *fp.oscillation_period : 0) << "\n";
    write_file(*paths.csv, csv.str(), &outcome.files_written);
  }
  if (paths.json_path.has_value()) {
    json basis = json::array();
    for (const auto& b : fp.fixed_space_basis) basis.push_back(matrix_to_json(b));
    json doc{{"config", config},
             {"fixed_space_dimension", fp.fixed_space_basis.size()},
             {"unique", fp.unique},
             {"residual", fp.residual},
             {"rank_warning", fp.rank_warning},
             {"canonical", matrix_to_json(fp.canonical.matrix())},
             {"fixed_space_basis", basis},
             {"oscillation_detected", fp.oscillation_detected},
             {"oscillation_period",
              fp.oscillation_period ? json(*fp.oscillation_period) : json(nullptr)}};
    write_file(*paths.json_path, doc.dump(2) + "\n", &outcome.files_written);
  }
  return outcome;
}

RunOutcome run_compare_semantics(const json& config, const Scenario& scenario) {
  if (scenario.ensemble.empty()) {
    throw ConfigError("compare-semantics run needs config field 'ensemble'");
  }
  const Unitary u = build_gate(scenario.interaction);
  const SemanticsComparison cmp = semantics_compare(u, parse_ensemble(scenario.ensemble));

  auto line = [](const char* name, const CorrelationMetrics& m) {
    std::ostringstream os;
    os << "  " << name << ": zz=" << format_number(m.zz)
       << "  mi_bits=" << format_number(m.mutual_information_bits) << "  p=("
       << format_number(m.joint_probs[0]) << ", " << format_number(m.joint_probs[1]) << ", "
       << format_number(m.joint_probs[2]) << ", " << format_number(m.joint_probs[3]) << ")\n";
    return os.str();
  };
  RunOutcome outcome;
  outcome.human_text = "semantics comparison (shot-by-shot vs whole-ensemble trace): unitary=" +
                       scenario.interaction + "\n" + line("per_component  ", cmp.per_component) +
                       line("whole_ensemble ", cmp.whole_ensemble);

  const OutputPaths paths = parse_outputs(config);
  auto metrics_json = [](const CorrelationMetrics& m) {
    return json{{"zz", m.zz},
                {"mutual_info_bits", m.mutual_information_bits},
                {"p00", m.joint_probs[0]},
                {"p01", m.joint_probs[1]},
                {"p10", m.joint_probs[2]},
                {"p11", m.joint_probs[3]}};
  };
  if (paths.csv.has_value()) {
    std::ostringstream csv;
    csv << "branch,zz,mutual_info_bits,p00,p01,p10,p11\n";
    auto row = [&](const char* name, const CorrelationMetrics& m) {
      csv << name << ',' << format_number(m.zz) << ','
          << format_number(m.mutual_information_bits);
      for (double p : m.joint_probs) csv << ',' << format_number(p);
      csv << "\n";
    };
    row("per_component", cmp.per_component);
    row("whole_ensemble", cmp.whole_ensemble);
    write_file(*paths.csv, csv.str(), &outcome.files_written);
  }
  if (paths.json_path.has_value()) {
    json doc{{"config", config},
             {"per_component", metrics_json(cmp.per_component)},
             {"whole_ensemble", metrics_json(cmp.whole_ensemble)}};
    write_file(*paths.json_path, doc.dump(2) + "\n", &outcome.files_written);
  }
  return outcome;
}

RunOutcome run_ordering_check(const json& config, const Scenario& scenario) {
  const OrderingCheckResult check = ordering_consistency_check(scenario);
  RunOutcome outcome;
  {
    std::ostringstream os;
    os << "ordering consistency check: unitary=" << scenario.interaction << "\n"
       << "  max_discrepancy (Density rule, both orderings): "
       << format_number(check.max_discrepancy) << "\n"
       << "  contrast_discrepancy (Prepared rule on the measured ensemble, non-physical): "
       << format_number(check.contrast_discrepancy) << "\n";
    outcome.human_text = os.str();
  }
  const OutputPaths paths = parse_outputs(config);
  if (paths.csv.has_value()) {
    std::ostringstream csv;
    csv << "max_discrepancy,contrast_discrepancy\n"
        << format_number(check.max_discrepancy) << ','
        << format_number(check.contrast_discrepancy) << "\n";
    write_file(*paths.csv, csv.str(), &outcome.files_written);
  }
  if (paths.json_path.has_value()) {
    json doc{{"config", config},
             {"max_discrepancy", check.max_discrepancy},
             {"contrast_discrepancy", check.contrast_discrepancy}};
    write_file(*paths.json_path, doc.dump(2) + "\n", &outcome.files_written);
  }
  return outcome;
}

}  // namespace

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

Scenario scenario_from_config(const json& config) {
  if (!config.is_object()) throw ConfigError("config document must be a JSON object");
  Scenario scenario;
  scenario.interaction = require_string(config, "unitary");

  if (config.contains("system_state")) scenario.system_state = require_string(config, "system_state");
  if (config.contains("entangled")) scenario.entangled = require_string(config, "entangled");
  if (config.contains("ensemble")) {
    if (!config["ensemble"].is_array() || config["ensemble"].empty()) {
      throw ConfigError("config field 'ensemble' must be a non-empty array");
    }
    for (const auto& member : config["ensemble"]) {
      EnsembleMemberSpec spec;
      if (!member.contains("p") || !member["p"].is_number()) {
        throw ConfigError("ensemble member needs a numeric field 'p'");
      }
      spec.probability = member["p"].get<double>();
      if (!member.contains("traveler") || !member["traveler"].is_string()) {
        throw ConfigError("ensemble member needs a string field 'traveler'");
      }
      spec.traveler = member["traveler"].get<std::string>();
      if (member.contains("reference")) spec.reference = member["reference"].get<std::string>();
      scenario.ensemble.push_back(std::move(spec));
    }
  }
  if (config.contains("lift")) {
    scenario.lift = parse_lift(require_string(config, "lift"));
  } else if (scenario.entangled.has_value()) {
    scenario.lift = LiftChoice::Density;
  }
  if (config.contains("ordering")) {
    scenario.ordering = parse_ordering(require_string(config, "ordering"));
  }
  if (config.contains("n_list")) {
    if (!config["n_list"].is_array()) throw ConfigError("config field 'n_list' must be an array");
    for (const auto& v : config["n_list"]) {
      if (!v.is_number_integer() || v.get<long long>() < 1) {
        throw ConfigError("config field 'n_list' entries must be integers >= 1");
      }
      scenario.n_list.push_back(v.get<std::size_t>());
    }
  }
  if (config.contains("seed")) {
    if (!config["seed"].is_number_integer() || config["seed"].get<long long>() < 0) {
      throw ConfigError("config field 'seed' must be a nonnegative integer");
    }
    scenario.seed = config["seed"].get<std::uint64_t>();
  }
  if (config.contains("ref_rotation")) scenario.ref_rotation = require_string(config, "ref_rotation");
  if (config.contains("out_rotation")) scenario.out_rotation = require_string(config, "out_rotation");
  return scenario;
}

RunOutcome run_config(const json& config) {
  const std::string experiment =
      config.contains("experiment") ? require_string(config, "experiment") : "";
  if (experiment.empty()) throw ConfigError("config field 'experiment' is required");
  const Scenario scenario = scenario_from_config(config);

  if (experiment == "fixed-point") return run_fixed_point(config, scenario);
  if (experiment == "equiv") {
    return emit_correlation_outputs(config, "equivalent-circuit run: unitary=" + scenario.interaction,
                                    equiv_rows(scenario));
  }
  if (experiment == "prepared") {
    return emit_correlation_outputs(config,
                                    "prepared-ensemble experiment: unitary=" + scenario.interaction,
                                    run_prepared_experiment(scenario));
  }
  if (experiment == "entangled") {
    return emit_correlation_outputs(config,
                                    "entangled-source experiment: unitary=" + scenario.interaction,
                                    run_entangled_experiment(scenario));
  }
  if (experiment == "compare-semantics") return run_compare_semantics(config, scenario);
  if (experiment == "ordering-check") return run_ordering_check(config, scenario);
  throw ConfigError("unknown experiment '" + experiment +
                    "' (expected fixed-point|equiv|prepared|entangled|compare-semantics|ordering-check)");
}

}  // namespace ctcsim
