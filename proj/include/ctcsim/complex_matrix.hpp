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

#ifndef CTCSIM_COMPLEX_MATRIX_HPP
#define CTCSIM_COMPLEX_MATRIX_HPP

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <vector>

namespace ctcsim {

using Complex = std::complex<double>;

/// Hard ceiling on any matrix side. The largest instance the simulator ever
/// materializes is the unrolled chain at eleven qubit registers (2^11 = 2048),
/// so 4096 leaves one doubling of headroom.
inline constexpr std::size_t kMaxMatrixDim = 4096;

/// Dense complex matrix, row-major storage.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix zero(std::size_t rows, std::size_t cols);
  /// Column vector from entries.
  static ComplexMatrix column(const std::vector<Complex>& entries);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }
  bool empty() const { return data_.empty(); }

  Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  Complex* row_data(std::size_t r) { return data_.data() + r * cols_; }
  const Complex* row_data(std::size_t r) const { return data_.data() + r * cols_; }
  const std::vector<Complex>& entries() const { return data_; }

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(Complex scale);

  ComplexMatrix adjoint() const;
  ComplexMatrix transpose() const;
  ComplexMatrix conjugate() const;

  Complex trace() const;
  double max_abs() const;
  double frobenius_norm() const;
  bool all_finite() const;
  bool is_hermitian(double tol) const;
  /// max |(U†U - I)[i][j]|; meaningful for square matrices only.
  double unitarity_residual() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(Complex scale, ComplexMatrix m);

/// max |a[i][j] - b[i][j]|; matrices must have equal shape.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

/// Kronecker product; block (i, j) of the result equals a(i, j) * b.
/// Throws std::length_error once the product would exceed kMaxMatrixDim,
/// which marks the instance as too large to simulate.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace ctcsim

#endif
