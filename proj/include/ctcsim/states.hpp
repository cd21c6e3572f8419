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

#ifndef CTCSIM_STATES_HPP
#define CTCSIM_STATES_HPP

#include <array>
#include <cstddef>
#include <vector>

#include "ctcsim/complex_matrix.hpp"

namespace ctcsim {

// Composite indexing is big-endian throughout: the basis index of (s, c) in a
// (d_s, d_c) product is s * d_c + c, and the leftmost register varies slowest.

/// Normalized pure state over labeled subsystems.
class PureState {
 public:
  PureState(std::vector<Complex> amplitudes, std::vector<std::size_t> subsystem_dims);

  /// Computational basis state |index> over the given dims.
  static PureState basis_state(std::size_t index, std::vector<std::size_t> subsystem_dims);

  const std::vector<Complex>& amplitudes() const { return amps_; }
  const std::vector<std::size_t>& subsystem_dims() const { return dims_; }
  std::size_t dim() const { return amps_.size(); }

 private:
  std::vector<Complex> amps_;
  std::vector<std::size_t> dims_;
};

/// Hermitian, unit-trace operator over labeled subsystems. Construction
/// checks shape, finiteness, Hermiticity (1e-10) and trace (1e-10);
/// positive semidefiniteness holds for every state the library produces and
/// can be checked explicitly through min_eigenvalue().
class DensityMatrix {
 public:
  DensityMatrix(ComplexMatrix matrix, std::vector<std::size_t> subsystem_dims);

  static DensityMatrix from_pure(const PureState& psi);
  static DensityMatrix maximally_mixed(std::vector<std::size_t> subsystem_dims);

  const ComplexMatrix& matrix() const { return mat_; }
  const std::vector<std::size_t>& subsystem_dims() const { return dims_; }
  std::size_t dim() const { return mat_.rows(); }
  std::size_t num_subsystems() const { return dims_.size(); }

  double min_eigenvalue() const;
  /// Same operator with the subsystem partition replaced (product must match).
  DensityMatrix repartitioned(std::vector<std::size_t> subsystem_dims) const;

 private:
  ComplexMatrix mat_;
  std::vector<std::size_t> dims_;
};

/// Unitary over labeled subsystems; U†U = I within 1e-10 is enforced.
class Unitary {
 public:
  Unitary(ComplexMatrix matrix, std::vector<std::size_t> subsystem_dims);

  const ComplexMatrix& matrix() const { return mat_; }
  const std::vector<std::size_t>& subsystem_dims() const { return dims_; }
  std::size_t dim() const { return mat_.rows(); }

 private:
  ComplexMatrix mat_;
  std::vector<std::size_t> dims_;
};

/// Reduced state over the kept subsystems, in their original relative order.
DensityMatrix partial_trace(const DensityMatrix& state, const std::vector<std::size_t>& keep);

/// Partial trace on a raw matrix (no density-operator validation). Used where
/// linear maps act on general operators, not just states.
ComplexMatrix partial_trace_matrix(const ComplexMatrix& mat, const std::vector<std::size_t>& dims,
                                   const std::vector<std::size_t>& keep);

/// Conjugates the state by u embedded on the target subsystems (identity on
/// the rest): returns U~ rho U~†.
DensityMatrix apply_unitary(const DensityMatrix& state, const Unitary& u,
                            const std::vector<std::size_t>& targets);

/// (1/2) sum |eigenvalues(a - b)|.
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);
/// Trace distance on raw Hermitian matrices of equal shape.
double trace_distance_matrix(const ComplexMatrix& a, const ComplexMatrix& b);

struct MeasurementBranch {
  std::size_t outcome;
  double probability;
  DensityMatrix post_state;  // measured register collapsed, full dims kept
};

/// Computational-basis measurement of one subsystem. Branch probabilities are
/// the diagonal block traces; branches below probability 1e-14 are dropped.
std::vector<MeasurementBranch> measure_computational(const DensityMatrix& state,
                                                     std::size_t subsystem);

/// Joint outcome statistics between two qubit registers.
struct CorrelationMetrics {
  double zz = 0.0;                        // sum (-1)^{a+b} p(a,b)
  double mutual_information_bits = 0.0;   // base-2, with 0 log 0 = 0
  std::array<double, 4> joint_probs{};    // p(a,b) at index 2a + b
};

/// Requires exactly two declared registers, both of qubit dimension.
CorrelationMetrics correlation_metrics(const DensityMatrix& joint);

// Index bookkeeping shared by the subsystem operations.
std::vector<std::size_t> subsystem_strides(const std::vector<std::size_t>& dims);
std::size_t total_dim(const std::vector<std::size_t>& dims);

}  // namespace ctcsim

#endif
