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

#ifndef CTCSIM_DEUTSCH_HPP
#define CTCSIM_DEUTSCH_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include "ctcsim/states.hpp"

namespace ctcsim {

/// The channel on the loop register induced by an interaction U over the
/// (system, CTC) slots and a chronology-respecting system input rho_sys:
///
///   Phi(sigma) = Tr_sys[ U (rho_sys ⊗ sigma) U† ]
///
/// The consistency condition asks for sigma with Phi(sigma) = sigma.
class DeutschMap {
 public:
  DeutschMap(Unitary interaction, DensityMatrix system_input);

  const Unitary& interaction() const { return interaction_; }
  const DensityMatrix& system_input() const { return system_input_; }
  std::size_t system_dim() const { return interaction_.subsystem_dims()[0]; }
  std::size_t ctc_dim() const { return interaction_.subsystem_dims()[1]; }

 private:
  Unitary interaction_;
  DensityMatrix system_input_;
};

/// Phi(sigma) as a state-to-state map.
DensityMatrix deutsch_map_apply(const DeutschMap& map, const DensityMatrix& sigma);

/// Linear extension of Phi to arbitrary operators on the loop register.
ComplexMatrix deutsch_map_apply_matrix(const DeutschMap& map, const ComplexMatrix& sigma);

/// The d²×d² matrix S with S vec(sigma) = vec(Phi(sigma)) under row-major
/// vectorization.
ComplexMatrix superoperator_matrix(const DeutschMap& map);

/// The emitted system state Tr_ctc[U (rho_sys ⊗ sigma_fixed) U†].
DensityMatrix ctc_output(const DeutschMap& map, const DensityMatrix& sigma_fixed);

/// The solution the unrolled n -> infinity chain selects: the Cesaro limit of
/// (1/N) sum_{k=1..N} Phi^k(seed). Computed as the spectral projection of
/// Phi(seed) onto ker(S - I) along range(S - I), which is that limit in exact
/// arithmetic and reaches it at machine precision instead of O(1/N).
/// Throws std::runtime_error when the projected state fails the fixed-point
/// residual bound 1e-8, which signals a numerics bug.
DensityMatrix canonical_fixed_point(const DeutschMap& map, const DensityMatrix& seed);

struct PowerIterateResult {
  DensityMatrix state;
  bool oscillation_detected = false;
  std::optional<std::size_t> period;
};

/// Plain mode returns Phi^n(seed); averaged mode the running mean
/// (1/n) sum_{k=1..n} Phi^k(seed). Oscillation is reported when the final
/// iterate matches an earlier one p <= 8 steps back (trace distance <= 1e-10)
/// while still moving step to step (> 1e-6).
PowerIterateResult power_iterate(const DeutschMap& map, const DensityMatrix& seed, std::size_t n,
                                 bool averaged);

struct FixedPointReport {
  /// Hermitian, trace-orthonormal basis of the fixed operator space.
  std::vector<ComplexMatrix> fixed_space_basis;
  DensityMatrix canonical;
  bool unique = false;
  double residual = 0.0;
  /// A rank pivot fell within 10x of the threshold; the reported dimension
  /// may be off by one.
  bool rank_warning = false;
  /// Plain iteration from the canonical seed cycles instead of settling; the
  /// canonical solution is then the running-average (Cesaro) choice.
  bool oscillation_detected = false;
  std::optional<std::size_t> oscillation_period;
};

/// Basis of ker(S - I), Hermitianized and re-orthonormalized, plus the
/// canonical solution. The canonical seed is the system input when the two
/// slots share a dimension, otherwise the maximally mixed loop state.
FixedPointReport fixed_point_set(const DeutschMap& map);

}  // namespace ctcsim

#endif
