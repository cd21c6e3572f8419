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

#ifndef CTCSIM_EQUIV_CIRCUIT_HPP
#define CTCSIM_EQUIV_CIRCUIT_HPP

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "ctcsim/deutsch.hpp"
#include "ctcsim/states.hpp"

namespace ctcsim {

enum class LiftRule {
  /// Per-pure-component copies: the n-copy state of an ensemble {p_k, psi_k}
  /// is sum_k p_k (|psi_k><psi_k|)^(⊗n). Models correlation via preparation.
  Prepared,
  /// Whole-density copies rho^(⊗n) of the traveler marginal, any reference
  /// carried as an independent factor. Models ensembles derived from
  /// entanglement, which the loop de-correlates.
  Density,
};

struct LiftComponent {
  double weight;
  DensityMatrix copy_state;                  // one traveler register
  std::optional<DensityMatrix> reference;    // carried alongside, never copied
};

/// Symbolic n-fold copy description. The copy count stays symbolic: copies
/// are never materialized here, evaluation ops take n separately.
struct LiftedInput {
  std::vector<LiftComponent> components;
  LiftRule rule;
};

struct PreparedMember {
  double probability;
  PureState traveler;
  std::optional<PureState> reference;
};

/// Lift of a locally prepared pure-state ensemble (Prepared rule).
/// Throws on an empty ensemble or weights not summing to 1.
LiftedInput lift_prepared(const std::vector<PreparedMember>& ensemble);

/// Same lifting for callers holding density operators; each traveler must be
/// pure (largest eigenvalue within 1e-8 of 1), otherwise the call is rejected
/// with a pointer at lift_density.
struct PreparedDensityMember {
  double probability;
  DensityMatrix traveler;
  std::optional<DensityMatrix> reference;
};
LiftedInput lift_prepared_density(const std::vector<PreparedDensityMember>& ensemble);

/// Whole-density lift (Density rule): one component of weight 1.
LiftedInput lift_density(const DensityMatrix& traveler,
                         std::optional<DensityMatrix> reference = std::nullopt);

struct EquivCircuitResult {
  /// Detected mode (the system output of the final interaction), joint with
  /// the reference register when one is present.
  DensityMatrix output;
  /// Loop rail as it enters the final interaction, i.e. Phi^(n-1)(copy).
  DensityMatrix rail_state;
  std::size_t n_used = 0;
  bool oscillation = false;
};

/// Brute-force reference semantics: materializes n+1 registers in copy_state
/// (one rail seed plus n system copies), applies u as gate i on
/// (system copy i, rail) for i = 1..n, and reduces. Total dimension d^(n+1)
/// is capped at 4096.
EquivCircuitResult equiv_circuit_unrolled(const Unitary& u, const DensityMatrix& copy_state,
                                          std::size_t n);

/// Contracted evaluation: per component the rail is power-iterated through
/// the induced Deutsch map (rail after gate m is Phi^(m-1) of the copy) and
/// the detected output is ctc_output at the final rail. Component outputs are
/// mixed by weight, with references tensored in front when present.
EquivCircuitResult equiv_circuit_contracted(const Unitary& u, const LiftedInput& lifted,
                                            std::size_t n);

/// Deutsch-consistent target output for a lifted input: canonical fixed point
/// then ctc_output per component, mixed by weights.
DensityMatrix deutsch_consistent_output(const Unitary& u, const LiftedInput& lifted);

/// Trace distance between the n-gate output and the Deutsch-consistent
/// output, for each n in ascending n_list.
std::vector<std::pair<std::size_t, double>> convergence_series(
    const Unitary& u, const LiftedInput& lifted, const std::vector<std::size_t>& n_list);

}  // namespace ctcsim

#endif
