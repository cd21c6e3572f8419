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

#include "ctcsim/linalg.hpp"

#include <doctest.h>

#include "test_support.hpp"

using namespace ctcsim;
using ctcsim::testing::TestRng;
using ctcsim::testing::random_hermitian;

namespace {

const ComplexMatrix kPauliX{{0.0, 1.0}, {1.0, 0.0}};

ComplexMatrix reconstruct(const EigenDecomposition& eig) {
  const std::size_t n = eig.eigenvalues.size();
  ComplexMatrix out(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      Complex acc = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        acc += eig.eigenvectors(r, k) * eig.eigenvalues[k] * std::conj(eig.eigenvectors(c, k));
      }
      out(r, c) = acc;
    }
  }
  return out;
}

}  // namespace

TEST_CASE("eigen of a diagonal matrix sorts ascending") {
  ComplexMatrix d(3, 3);
  d(0, 0) = 3.0;
  d(1, 1) = 1.0;
  d(2, 2) = 2.0;
  const EigenDecomposition eig = hermitian_eigen(d);
  CHECK(eig.eigenvalues[0] == doctest::Approx(1.0));
  CHECK(eig.eigenvalues[1] == doctest::Approx(2.0));
  CHECK(eig.eigenvalues[2] == doctest::Approx(3.0));
}

TEST_CASE("eigen of Pauli X") {
  const EigenDecomposition eig = hermitian_eigen(kPauliX);
  CHECK(eig.eigenvalues[0] == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(eig.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("eigen reconstruction and orthonormality on seeded Hermitian input") {
  TestRng rng(311);
  const ComplexMatrix h = random_hermitian(4, rng);
  const EigenDecomposition eig = hermitian_eigen(h);

  CHECK(max_abs_diff(reconstruct(eig), h) <= 1e-10);
  // Gram matrix of eigenvector columns
  const ComplexMatrix gram = eig.eigenvectors.adjoint() * eig.eigenvectors;
  CHECK(max_abs_diff(gram, ComplexMatrix::identity(4)) <= 1e-10);
  // eigenvalue sum matches the trace
  double sum = 0.0;
  for (double w : eig.eigenvalues) sum += w;
  CHECK(sum == doctest::Approx(h.trace().real()).epsilon(1e-10));
}

TEST_CASE("eigen handles larger seeded instances") {
  TestRng rng(312);
  const ComplexMatrix h = random_hermitian(16, rng);
  const EigenDecomposition eig = hermitian_eigen(h);
  CHECK(max_abs_diff(reconstruct(eig), h) <= 1e-10);
}

TEST_CASE("eigen rejects non-Hermitian input") {
  ComplexMatrix m(2, 2);
  m(0, 1) = Complex(1.0, 0.0);
  CHECK_THROWS_AS(hermitian_eigen(m), std::invalid_argument);
}

TEST_CASE("nullspace of the zero matrix is everything") {
  const auto basis = nullspace(ComplexMatrix(2, 2), 1e-9);
  CHECK(basis.size() == 2);
}

TEST_CASE("nullspace of the identity is empty") {
  CHECK(nullspace(ComplexMatrix::identity(2), 1e-9).empty());
}

TEST_CASE("nullspace of X⊗X - I has dimension two") {
  ComplexMatrix m = kron(kPauliX, kPauliX.transpose());
  for (std::size_t i = 0; i < 4; ++i) m(i, i) -= 1.0;
  const auto basis = nullspace(m, 1e-9);
  CHECK(basis.size() == 2);

  // brute force: X⊗X really fixes each basis vector
  const ComplexMatrix xx = kron(kPauliX, kPauliX);
  for (const auto& v : basis) {
    CHECK(max_abs_diff(xx * v, v) <= 1e-12);
  }
  // orthonormal pair
  Complex overlap = 0.0;
  double n0 = 0.0, n1 = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    overlap += std::conj(basis[0](i, 0)) * basis[1](i, 0);
    n0 += std::norm(basis[0](i, 0));
    n1 += std::norm(basis[1](i, 0));
  }
  CHECK(std::abs(overlap) <= 1e-12);
  CHECK(n0 == doctest::Approx(1.0));
  CHECK(n1 == doctest::Approx(1.0));
}

TEST_CASE("nullspace vectors satisfy the residual bound") {
  // rank-deficient seeded matrices: A = B C with thin inner dimension
  TestRng rng(313);
  for (int trial = 0; trial < 5; ++trial) {
    const ComplexMatrix b = ctcsim::testing::random_matrix(5, 3, rng);
    const ComplexMatrix c = ctcsim::testing::random_matrix(3, 5, rng);
    const ComplexMatrix m = b * c;
    const double tol = 1e-9;
    const auto basis = nullspace(m, tol);
    CHECK(basis.size() >= 2);
    for (const auto& v : basis) {
      const ComplexMatrix mv = m * v;
      double norm = 0.0;
      for (std::size_t i = 0; i < mv.rows(); ++i) norm += std::norm(mv(i, 0));
      CHECK(std::sqrt(norm) <= 10.0 * tol);
    }
  }
}

TEST_CASE("nullspace flags ambiguous rank") {
  ComplexMatrix m = ComplexMatrix::identity(3);
  m(2, 2) = 3e-9;  // within 10x of the 1e-9 pivot threshold
  const NullspaceResult res = nullspace_with_info(m, 1e-9);
  CHECK(res.rank_ambiguous);
}

TEST_CASE("solve_linear on a seeded system") {
  TestRng rng(314);
  const ComplexMatrix a = ctcsim::testing::random_matrix(6, 6, rng);
  std::vector<Complex> x_true(6);
  for (auto& v : x_true) v = rng.gaussian_complex();
  std::vector<Complex> b(6, Complex(0.0, 0.0));
  for (std::size_t i = 0; i < 6; ++i) {
    for (std::size_t j = 0; j < 6; ++j) b[i] += a(i, j) * x_true[j];
  }
  const std::vector<Complex> x = solve_linear(a, b);
  for (std::size_t i = 0; i < 6; ++i) CHECK(std::abs(x[i] - x_true[i]) <= 1e-10);
}
