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

#include "ctcsim/equiv_circuit.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "ctcsim/linalg.hpp"

namespace ctcsim {

namespace {

constexpr double kWeightSumTol = 1e-10;
constexpr double kPurityTol = 1e-8;
constexpr double kOscillationMatchTol = 1e-10;
constexpr double kOscillationMoveTol = 1e-6;
constexpr std::size_t kOscillationWindow = 8;

void check_components(const std::vector<LiftComponent>& components) {
  if (components.empty()) throw std::invalid_argument("lift: empty ensemble");
  double total = 0.0;
  const bool has_ref = components.front().reference.has_value();
  for (const auto& comp : components) {
    if (!(comp.weight > 0.0)) throw std::invalid_argument("lift: weights must be positive");
    total += comp.weight;
    if (comp.copy_state.dim() != components.front().copy_state.dim()) {
      throw std::invalid_argument("lift: traveler dimensions differ across components");
    }
    if (comp.reference.has_value() != has_ref) {
      throw std::invalid_argument("lift: either all components carry a reference or none");
    }
    if (has_ref && comp.reference->dim() != components.front().reference->dim()) {
      throw std::invalid_argument("lift: reference dimensions differ across components");
    }
  }
  if (std::abs(total - 1.0) > kWeightSumTol) {
    throw std::invalid_argument("lift: weights sum to " + std::to_string(total) + ", expected 1");
  }
}

bool oscillates(const std::vector<ComplexMatrix>& history) {
  if (history.size() < 3) return false;
  const std::size_t last = history.size() - 1;
  if (trace_distance_matrix(history[last], history[last - 1]) <= kOscillationMoveTol) return false;
  const std::size_t max_p = std::min(kOscillationWindow, last);
  for (std::size_t p = 2; p <= max_p; ++p) {
    if (trace_distance_matrix(history[last], history[last - p]) <= kOscillationMatchTol) {
      return true;
    }
  }
  return false;
}

DeutschMap component_map(const Unitary& u, const DensityMatrix& copy_state) {
  if (u.subsystem_dims().size() != 2) {
    throw std::invalid_argument("equiv circuit: interaction must declare (system, CTC) slots");
  }
  if (u.subsystem_dims()[0] != u.subsystem_dims()[1]) {
    throw std::invalid_argument(
        "equiv circuit: system and CTC slots must share a dimension, the copy feeds both");
  }
  if (copy_state.dim() != u.subsystem_dims()[0]) {
    throw std::invalid_argument("equiv circuit: copy state does not match the interaction slots");
  }
  return DeutschMap(u, copy_state.repartitioned({copy_state.dim()}));
}

/// Weighted mixture of per-component outputs; references (when present) are
/// tensored in front of each component output.
DensityMatrix mix_outputs(const std::vector<LiftComponent>& components,
                          const std::vector<DensityMatrix>& outputs) {
  const bool has_ref = components.front().reference.has_value();
  ComplexMatrix acc;
  std::vector<std::size_t> dims;
  for (std::size_t k = 0; k < components.size(); ++k) {
    ComplexMatrix term = has_ref
                             ? kron(components[k].reference->matrix(), outputs[k].matrix())
                             : outputs[k].matrix();
    term *= Complex(components[k].weight, 0.0);
    if (k == 0) {
      acc = std::move(term);
      dims = has_ref ? std::vector<std::size_t>{components[k].reference->dim(), outputs[k].dim()}
                     : std::vector<std::size_t>{outputs[k].dim()};
    } else {
      acc += term;
    }
  }
  return DensityMatrix(std::move(acc), std::move(dims));
}

DensityMatrix mix_rails(const std::vector<LiftComponent>& components,
                        const std::vector<ComplexMatrix>& rails) {
  ComplexMatrix acc = rails[0];
  acc *= Complex(components[0].weight, 0.0);
  for (std::size_t k = 1; k < components.size(); ++k) {
    ComplexMatrix term = rails[k];
    term *= Complex(components[k].weight, 0.0);
    acc += term;
  }
  const std::size_t side = acc.rows();
  return DensityMatrix(std::move(acc), {side});
}

}  // namespace

LiftedInput lift_prepared(const std::vector<PreparedMember>& ensemble) {
  std::vector<LiftComponent> components;
  components.reserve(ensemble.size());
  for (const auto& member : ensemble) {
    std::optional<DensityMatrix> ref;
    if (member.reference.has_value()) ref = DensityMatrix::from_pure(*member.reference);
    components.push_back(
        LiftComponent{member.probability, DensityMatrix::from_pure(member.traveler), std::move(ref)});
  }
  check_components(components);
  return LiftedInput{std::move(components), LiftRule::Prepared};
}

LiftedInput lift_prepared_density(const std::vector<PreparedDensityMember>& ensemble) {
  std::vector<LiftComponent> components;
  components.reserve(ensemble.size());
  for (const auto& member : ensemble) {
    const EigenDecomposition eig = hermitian_eigen(member.traveler.matrix());
    if (eig.eigenvalues.back() < 1.0 - kPurityTol) {
      throw std::invalid_argument(
          "lift_prepared: traveler component is mixed (largest eigenvalue " +
          std::to_string(eig.eigenvalues.back()) +
          "); the Prepared rule is defined on pure components only, use lift_density");
    }
    components.push_back(LiftComponent{member.probability, member.traveler, member.reference});
  }
  check_components(components);
  return LiftedInput{std::move(components), LiftRule::Prepared};
}

LiftedInput lift_density(const DensityMatrix& traveler, std::optional<DensityMatrix> reference) {
  std::vector<LiftComponent> components;
  components.push_back(LiftComponent{1.0, traveler, std::move(reference)});
  return LiftedInput{std::move(components), LiftRule::Density};
}

EquivCircuitResult equiv_circuit_unrolled(const Unitary& u, const DensityMatrix& copy_state,
                                          std::size_t n) {
  if (n < 1) throw std::invalid_argument("equiv_circuit_unrolled: n must be at least 1");
  component_map(u, copy_state);  // shape checks only
  const std::size_t d = copy_state.dim();

  std::size_t total = 1;
  for (std::size_t i = 0; i < n + 1; ++i) {
    total *= d;
    if (total > kMaxMatrixDim) {
      throw std::length_error("equiv_circuit_unrolled: d^(n+1) = " + std::to_string(d) + "^" +
                              std::to_string(n + 1) + " exceeds cap " +
                              std::to_string(kMaxMatrixDim));
    }
  }

  // Registers: system copies 0..n-1, rail at index n. All start in the copy
  // state; gate i couples (copy i-1, rail).
  ComplexMatrix joint_mat = copy_state.matrix();
  for (std::size_t i = 1; i < n + 1; ++i) joint_mat = kron(joint_mat, copy_state.matrix());
  DensityMatrix joint(std::move(joint_mat), std::vector<std::size_t>(n + 1, d));

  std::vector<ComplexMatrix> rail_history;
  rail_history.reserve(n);
  DensityMatrix rail_in = partial_trace(joint, {n});
  rail_history.push_back(rail_in.matrix());

  for (std::size_t gate = 1; gate <= n; ++gate) {
    joint = apply_unitary(joint, u, {gate - 1, n});
    if (gate < n) {
      rail_in = partial_trace(joint, {n});
      rail_history.push_back(rail_in.matrix());
      if (rail_history.size() > kOscillationWindow + 2) rail_history.erase(rail_history.begin());
    }
  }

  EquivCircuitResult result{partial_trace(joint, {n - 1}), std::move(rail_in), n,
                            oscillates(rail_history)};
  return result;
}

EquivCircuitResult equiv_circuit_contracted(const Unitary& u, const LiftedInput& lifted,
                                            std::size_t n) {
  if (n < 1) throw std::invalid_argument("equiv_circuit_contracted: n must be at least 1");
  check_components(lifted.components);

  std::vector<DensityMatrix> outputs;
  std::vector<ComplexMatrix> rails;
  bool any_oscillation = false;

  for (const auto& comp : lifted.components) {
    const DeutschMap map = component_map(u, comp.copy_state);

    std::vector<ComplexMatrix> history;
    history.reserve(std::min(n, kOscillationWindow + 2));
    ComplexMatrix rail = map.system_input().matrix();
    history.push_back(rail);
    for (std::size_t step = 1; step < n; ++step) {
      rail = deutsch_map_apply_matrix(map, rail);
      history.push_back(rail);
      if (history.size() > kOscillationWindow + 2) history.erase(history.begin());
    }
    any_oscillation = any_oscillation || oscillates(history);

    const DensityMatrix rail_state(rail, {map.ctc_dim()});
    outputs.push_back(ctc_output(map, rail_state));
    rails.push_back(rail);
  }

  EquivCircuitResult result{mix_outputs(lifted.components, outputs),
                            mix_rails(lifted.components, rails), n, any_oscillation};
  return result;
}

DensityMatrix deutsch_consistent_output(const Unitary& u, const LiftedInput& lifted) {
  check_components(lifted.components);
  std::vector<DensityMatrix> outputs;
  for (const auto& comp : lifted.components) {
    const DeutschMap map = component_map(u, comp.copy_state);
    const DensityMatrix fixed = canonical_fixed_point(map, map.system_input());
    outputs.push_back(ctc_output(map, fixed));
  }
  return mix_outputs(lifted.components, outputs);
}

std::vector<std::pair<std::size_t, double>> convergence_series(
    const Unitary& u, const LiftedInput& lifted, const std::vector<std::size_t>& n_list) {
  if (n_list.empty()) throw std::invalid_argument("convergence_series: n_list empty");
  for (std::size_t i = 1; i < n_list.size(); ++i) {
    if (n_list[i] <= n_list[i - 1]) {
      throw std::invalid_argument("convergence_series: n_list must be ascending");
    }
  }
  const DensityMatrix target = deutsch_consistent_output(u, lifted);
  std::vector<std::pair<std::size_t, double>> series;
  series.reserve(n_list.size());
  for (std::size_t n : n_list) {
    const EquivCircuitResult res = equiv_circuit_contracted(u, lifted, n);
    series.push_back({n, trace_distance(res.output, target)});
  }
  return series;
}

}  // namespace ctcsim
