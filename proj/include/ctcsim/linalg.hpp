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

#ifndef CTCSIM_LINALG_HPP
#define CTCSIM_LINALG_HPP

#include <vector>

#include "ctcsim/complex_matrix.hpp"

namespace ctcsim {

/// Default tolerance for treating a matrix as Hermitian (max |h - h†| entry).
inline constexpr double kHermitianTol = 1e-10;
/// Default pivot threshold for numerical rank decisions.
inline constexpr double kNullspacePivotTol = 1e-9;

struct EigenDecomposition {
  std::vector<double> eigenvalues;  // ascending
  ComplexMatrix eigenvectors;       // column k pairs with eigenvalues[k]
};

/// Diagonalizes a Hermitian matrix with cyclic Jacobi rotations.
/// Eigenvalues come back ascending; eigenvector columns are orthonormal and
/// satisfy |V diag(w) V† - h|_max <= 1e-10.
/// Throws std::invalid_argument when h is not Hermitian within kHermitianTol
/// and std::runtime_error when the sweep cap is hit.
EigenDecomposition hermitian_eigen(const ComplexMatrix& h);

struct NullspaceResult {
  /// Orthonormal basis of {v : |m v| <= tol |v|}, one n-by-1 column each.
  std::vector<ComplexMatrix> basis;
  /// Column norms at each pivot decision, in elimination order. Entries above
  /// tol were accepted into the range; the first entry at or below tol (if
  /// any) stopped the factorization.
  std::vector<double> decision_pivots;
  /// True when some decision pivot fell within a factor of 10 of tol, i.e.
  /// the numerical rank is ambiguous at this threshold.
  bool rank_ambiguous = false;
};

/// Nullspace basis of a square matrix via Householder QR of m† with column
/// pivoting; columns of the orthogonal complement of range(m†) come back as
/// unit vectors.
NullspaceResult nullspace_with_info(const ComplexMatrix& m, double tol);

/// Convenience wrapper returning just the basis vectors.
std::vector<ComplexMatrix> nullspace(const ComplexMatrix& m, double tol);

/// Solves A x = b (square, small) by Gaussian elimination with partial
/// pivoting. Throws std::runtime_error on a singular pivot.
std::vector<Complex> solve_linear(const ComplexMatrix& a, const std::vector<Complex>& b);

}  // namespace ctcsim

#endif
