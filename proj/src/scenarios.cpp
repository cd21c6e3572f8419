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

#include "ctcsim/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace ctcsim {

namespace {

const std::vector<std::size_t> kDefaultNList = {1, 2, 4, 8, 16, 32};

std::vector<std::size_t> effective_n_list(const Scenario& scenario) {
  return scenario.n_list.empty() ? kDefaultNList : scenario.n_list;
}

std::optional<Unitary> parse_rotation(const std::optional<std::string>& spec) {
  if (!spec.has_value()) return std::nullopt;
  Unitary u = build_gate(*spec);
  if (u.dim() != 2) {
    throw std::invalid_argument("basis rotation must be a single-qubit gate, got '" + *spec + "'");
  }
  return u;
}

DensityMatrix rotate_for_readout(const DensityMatrix& joint, const std::optional<Unitary>& ref_rot,
                                 const std::optional<Unitary>& out_rot) {
  DensityMatrix state = joint;
  if (ref_rot.has_value()) state = apply_unitary(state, *ref_rot, {0});
  if (out_rot.has_value()) state = apply_unitary(state, *out_rot, {1});
  return state;
}

std::string provenance_tag(const Scenario& scenario, const char* experiment, std::size_t n) {
  std::ostringstream os;
  os << "experiment=" << experiment << " unitary=" << scenario.interaction << " n=" << n
     << " seed=" << scenario.seed;
  return os.str();
}

CorrelationReport make_report(const Scenario& scenario, const char* experiment,
                              const EquivCircuitResult& result, const DensityMatrix& target,
                              const std::optional<Unitary>& ref_rot,
                              const std::optional<Unitary>& out_rot) {
  const CorrelationMetrics metrics =
      correlation_metrics(rotate_for_readout(result.output, ref_rot, out_rot));
  CorrelationReport report;
  report.n = result.n_used;
  report.zz = metrics.zz;
  report.mutual_information_bits = metrics.mutual_information_bits;
  report.joint_distribution = metrics.joint_probs;
  report.dist_to_deutsch = trace_distance(result.output, target);
  report.oscillation = result.oscillation;
  report.provenance = provenance_tag(scenario, experiment, result.n_used);
  return report;
}

struct EntangledSource {
  DensityMatrix joint;     // (reference, traveler)
  DensityMatrix traveler;  // marginal
  DensityMatrix reference;
};

EntangledSource parse_entangled_source(const Scenario& scenario) {
  if (!scenario.entangled.has_value()) {
    throw std::invalid_argument("scenario needs an entangled source");
  }
  const PureState source = parse_state(*scenario.entangled);
  if (source.subsystem_dims().size() != 2) {
    throw std::invalid_argument("entangled source must declare two registers, got '" +
                                *scenario.entangled + "'");
  }
  DensityMatrix joint = DensityMatrix::from_pure(source);
  DensityMatrix traveler = partial_trace(joint, {1});
  DensityMatrix reference = partial_trace(joint, {0});
  return EntangledSource{std::move(joint), std::move(traveler), std::move(reference)};
}

/// Density-rule pipeline for an entangled source. The two orderings differ
/// in when the reference loses its coherences: After evolves the factorized
/// lift through the circuit and dephases the reference at readout, Before
/// dephases the source first and marginalizes afterwards.
EquivCircuitResult entangled_pipeline(const Unitary& u, const EntangledSource& source,
                                      std::size_t n, bool measure_before,
                                      const std::optional<Unitary>& ref_rot) {
  if (measure_before) {
    const DensityMatrix dephased = dephase_register(source.joint, 0, ref_rot);
    const DensityMatrix traveler = partial_trace(dephased, {1});
    const DensityMatrix reference = partial_trace(dephased, {0});
    return equiv_circuit_contracted(u, lift_density(traveler, reference), n);
  }
  EquivCircuitResult result = equiv_circuit_contracted(u, lift_density(source.traveler, source.reference), n);
  result.output = dephase_register(result.output, 0, ref_rot);
  return result;
}

std::array<double, 4> joint_distribution(const DensityMatrix& joint,
                                         const std::optional<Unitary>& ref_rot,
                                         const std::optional<Unitary>& out_rot) {
  return correlation_metrics(rotate_for_readout(joint, ref_rot, out_rot)).joint_probs;
}

}  // namespace

std::vector<PreparedMember> parse_ensemble(const std::vector<EnsembleMemberSpec>& specs,
                                           std::string* warning) {
  std::vector<PreparedMember> members;
  members.reserve(specs.size());
  for (const auto& spec : specs) {
    std::optional<PureState> ref;
    if (spec.reference.has_value()) ref = parse_state(*spec.reference, warning);
    members.push_back(PreparedMember{spec.probability, parse_state(spec.traveler, warning), std::move(ref)});
  }
  return members;
}

DensityMatrix dephase_register(const DensityMatrix& state, std::size_t reg,
                               const std::optional<Unitary>& basis_rotation) {
  DensityMatrix work = state;
  std::optional<Unitary> back;
  if (basis_rotation.has_value()) {
    work = apply_unitary(work, *basis_rotation, {reg});
    back = Unitary(basis_rotation->matrix().adjoint(), basis_rotation->subsystem_dims());
  }
  const auto& dims = work.subsystem_dims();
  if (reg >= dims.size()) throw std::invalid_argument("dephase_register: register out of range");
  const std::vector<std::size_t> stride = subsystem_strides(dims);
  const std::size_t d = dims[reg];

  ComplexMatrix m = work.matrix();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const std::size_t di = (i / stride[reg]) % d;
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (((j / stride[reg]) % d) != di) m(i, j) = 0.0;
    }
  }
  DensityMatrix out(std::move(m), dims);
  if (back.has_value()) out = apply_unitary(out, *back, {reg});
  return out;
}

std::vector<CorrelationReport> run_prepared_experiment(const Scenario& scenario) {
  const Unitary u = build_gate(scenario.interaction);
  if (scenario.ensemble.empty()) {
    throw std::invalid_argument("prepared experiment needs an ensemble input");
  }
  const std::vector<PreparedMember> members = parse_ensemble(scenario.ensemble);
  for (const auto& m : members) {
    if (!m.reference.has_value()) {
      throw std::invalid_argument(
          "prepared experiment needs reference labels on every ensemble member");
    }
  }
  const LiftedInput lifted = lift_prepared(members);
  const std::optional<Unitary> ref_rot = parse_rotation(scenario.ref_rotation);
  const std::optional<Unitary> out_rot = parse_rotation(scenario.out_rotation);
  const DensityMatrix target = deutsch_consistent_output(u, lifted);

  std::vector<CorrelationReport> reports;
  for (std::size_t n : effective_n_list(scenario)) {
    const EquivCircuitResult result = equiv_circuit_contracted(u, lifted, n);
    reports.push_back(make_report(scenario, "prepared", result, target, ref_rot, out_rot));
  }
  return reports;
}

std::vector<CorrelationReport> run_entangled_experiment(const Scenario& scenario) {
  if (scenario.lift == LiftChoice::Prepared) {
    throw std::invalid_argument(
        "the Prepared rule is not licensed for an unmeasured entangled source: no shot-by-shot "
        "pure decomposition exists; use lift=density, or ordering-check for the contrast branch");
  }
  const Unitary u = build_gate(scenario.interaction);
  const EntangledSource source = parse_entangled_source(scenario);
  const std::optional<Unitary> ref_rot = parse_rotation(scenario.ref_rotation);
  const std::optional<Unitary> out_rot = parse_rotation(scenario.out_rotation);

  const LiftedInput lifted = lift_density(source.traveler, source.reference);
  // the pipelines dephase the reference, so the consistency target must too
  const DensityMatrix target =
      dephase_register(deutsch_consistent_output(u, lifted), 0, ref_rot);

  std::vector<CorrelationReport> reports;
  for (std::size_t n : effective_n_list(scenario)) {
    const bool before = scenario.ordering == OrderingChoice::MeasureBeforeCTC;
    const EquivCircuitResult result = entangled_pipeline(u, source, n, before, ref_rot);
    CorrelationReport report = make_report(scenario, "entangled", result, target, ref_rot, out_rot);
    if (scenario.ordering == OrderingChoice::Both) {
      const EquivCircuitResult other = entangled_pipeline(u, source, n, true, ref_rot);
      const std::array<double, 4> pa = joint_distribution(result.output, ref_rot, out_rot);
      const std::array<double, 4> pb = joint_distribution(other.output, ref_rot, out_rot);
      double disc = 0.0;
      for (std::size_t i = 0; i < 4; ++i) disc = std::max(disc, std::abs(pa[i] - pb[i]));
      report.provenance += " ordering=both max_ordering_discrepancy=" + std::to_string(disc);
    } else {
      report.provenance += before ? " ordering=before" : " ordering=after";
    }
    reports.push_back(std::move(report));
  }
  return reports;
}

OrderingCheckResult ordering_consistency_check(const Scenario& scenario) {
  const Unitary u = build_gate(scenario.interaction);
  const EntangledSource source = parse_entangled_source(scenario);
  const std::optional<Unitary> ref_rot = parse_rotation(scenario.ref_rotation);
  const std::optional<Unitary> out_rot = parse_rotation(scenario.out_rotation);

  OrderingCheckResult out;
  for (std::size_t n : effective_n_list(scenario)) {
    const EquivCircuitResult after = entangled_pipeline(u, source, n, false, ref_rot);
    const EquivCircuitResult before = entangled_pipeline(u, source, n, true, ref_rot);
    const std::array<double, 4> pa = joint_distribution(after.output, ref_rot, out_rot);
    const std::array<double, 4> pb = joint_distribution(before.output, ref_rot, out_rot);
    for (std::size_t i = 0; i < 4; ++i) {
      out.max_discrepancy = std::max(out.max_discrepancy, std::abs(pa[i] - pb[i]));
    }

    // Contrast branch: collapse the reference first, then (against the
    // formalism) treat the resulting labeled ensemble as locally prepared.
    DensityMatrix measured_src = source.joint;
    if (ref_rot.has_value()) measured_src = apply_unitary(measured_src, *ref_rot, {0});
    const std::vector<MeasurementBranch> branches = measure_computational(measured_src, 0);
    std::vector<PreparedDensityMember> contrast_members;
    for (const auto& branch : branches) {
      contrast_members.push_back(PreparedDensityMember{
          branch.probability, partial_trace(branch.post_state, {1}),
          DensityMatrix::from_pure(PureState::basis_state(branch.outcome, {2}))});
    }
    const EquivCircuitResult contrasted =
        equiv_circuit_contracted(u, lift_prepared_density(contrast_members), n);
    const std::array<double, 4> pc = joint_distribution(contrasted.output, std::nullopt, out_rot);
    double tv = 0.0;
    for (std::size_t i = 0; i < 4; ++i) tv += std::abs(pc[i] - pa[i]);
    out.contrast_discrepancy = std::max(out.contrast_discrepancy, 0.5 * tv);
  }
  return out;
}

SemanticsComparison semantics_compare(const Unitary& u,
                                      const std::vector<PreparedMember>& ensemble) {
  if (ensemble.empty()) throw std::invalid_argument("semantics_compare: empty ensemble");
  for (const auto& m : ensemble) {
    if (!m.reference.has_value()) {
      throw std::invalid_argument("semantics_compare: every member needs a reference label");
    }
  }

  const LiftedInput lifted = lift_prepared(ensemble);
  SemanticsComparison out;
  out.per_component = correlation_metrics(deutsch_consistent_output(u, lifted));

  // Whole-ensemble reading: one consistency solve for the mixed traveler,
  // every shot then emitted against that common loop state.
  ComplexMatrix mix = lifted.components[0].copy_state.matrix();
  mix *= Complex(lifted.components[0].weight, 0.0);
  for (std::size_t k = 1; k < lifted.components.size(); ++k) {
    ComplexMatrix term = lifted.components[k].copy_state.matrix();
    term *= Complex(lifted.components[k].weight, 0.0);
    mix += term;
  }
  const std::size_t d = mix.rows();
  const DensityMatrix mixed_traveler(std::move(mix), {d});
  const DeutschMap ensemble_map(u, mixed_traveler);
  const DensityMatrix common_loop = canonical_fixed_point(ensemble_map, mixed_traveler);

  ComplexMatrix joint_acc;
  std::vector<std::size_t> joint_dims;
  for (std::size_t k = 0; k < lifted.components.size(); ++k) {
    const auto& comp = lifted.components[k];
    const DeutschMap shot_map(u, comp.copy_state.repartitioned({d}));
    const DensityMatrix emitted = ctc_output(shot_map, common_loop);
    ComplexMatrix term = kron(comp.reference->matrix(), emitted.matrix());
    term *= Complex(comp.weight, 0.0);
    if (k == 0) {
      joint_acc = std::move(term);
      joint_dims = {comp.reference->dim(), emitted.dim()};
    } else {
      joint_acc += term;
    }
  }
  out.whole_ensemble = correlation_metrics(DensityMatrix(std::move(joint_acc), joint_dims));
  return out;
}

SurveyReport fixed_point_survey(const std::string& interaction, const std::string& system_state) {
  const Unitary u = build_gate(interaction);
  if (u.subsystem_dims().size() != 2) {
    throw std::invalid_argument("fixed-point survey: interaction '" + interaction +
                                "' must declare (system, CTC) slots");
  }
  const PureState psi = parse_state(system_state);
  const DensityMatrix rho = DensityMatrix::from_pure(psi);
  if (rho.dim() != u.subsystem_dims()[0]) {
    throw std::invalid_argument("fixed-point survey: system state dimension " +
                                std::to_string(rho.dim()) + " does not match system slot " +
                                std::to_string(u.subsystem_dims()[0]));
  }
  const DeutschMap map(u, rho);
  return SurveyReport{interaction, system_state, fixed_point_set(map)};
}

}  // namespace ctcsim
