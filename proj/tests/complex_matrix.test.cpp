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

#include "ctcsim/complex_matrix.hpp"

#include <doctest.h>

#include "test_support.hpp"

using namespace ctcsim;
using ctcsim::testing::TestRng;
using ctcsim::testing::random_matrix;

TEST_CASE("kron of identities is the identity") {
  const ComplexMatrix i2 = ComplexMatrix::identity(2);
  CHECK(max_abs_diff(kron(i2, i2), ComplexMatrix::identity(4)) == 0.0);
}

TEST_CASE("kron keeps the big-endian basis order") {
  // |0><0| ⊗ |1><1| lives at basis index 0*2+1 = 1
  const ComplexMatrix p0{{1.0, 0.0}, {0.0, 0.0}};
  const ComplexMatrix p1{{0.0, 0.0}, {0.0, 1.0}};
  const ComplexMatrix prod = kron(p0, p1);
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t c = 0; c < 4; ++c) {
      CHECK(prod(r, c) == ((r == 1 && c == 1) ? Complex(1.0, 0.0) : Complex(0.0, 0.0)));
    }
  }
}

TEST_CASE("kron mixed-product identity on seeded matrices") {
  TestRng rng(301);
  const ComplexMatrix a = random_matrix(2, 2, rng);
  const ComplexMatrix b = random_matrix(2, 2, rng);
  const ComplexMatrix c = random_matrix(2, 2, rng);
  const ComplexMatrix d = random_matrix(2, 2, rng);
  CHECK(max_abs_diff(kron(a, b) * kron(c, d), kron(a * c, b * d)) <= 1e-12);
}

TEST_CASE("kron is associative with exact arithmetic") {
  // entries whose products are exact in binary floating point
  TestRng rng(302);
  auto exact = [&](std::size_t rows, std::size_t cols) {
    ComplexMatrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < cols; ++c) {
        m(r, c) = Complex(std::floor(8.0 * rng.symmetric()) * 0.5,
                          std::floor(8.0 * rng.symmetric()) * 0.25);
      }
    }
    return m;
  };
  const ComplexMatrix a = exact(2, 3);
  const ComplexMatrix b = exact(3, 2);
  const ComplexMatrix c = exact(2, 2);
  CHECK(max_abs_diff(kron(kron(a, b), c), kron(a, kron(b, c))) == 0.0);
}

TEST_CASE("kron rejects instances beyond the dimension cap") {
  const ComplexMatrix big(100, 100);
  CHECK_THROWS_AS(kron(big, big), std::length_error);
}

TEST_CASE("adjoint conjugate-transposes") {
  ComplexMatrix m(2, 3);
  m(0, 1) = Complex(1.0, 2.0);
  m(1, 2) = Complex(-3.0, 0.5);
  const ComplexMatrix a = m.adjoint();
  CHECK(a.rows() == 3);
  CHECK(a(1, 0) == Complex(1.0, -2.0));
  CHECK(a(2, 1) == Complex(-3.0, -0.5));
}

TEST_CASE("trace and norms") {
  ComplexMatrix m{{Complex(1.0, 0.0), Complex(0.0, 2.0)}, {Complex(0.0, 0.0), Complex(3.0, 0.0)}};
  CHECK(m.trace() == Complex(4.0, 0.0));
  CHECK(m.max_abs() == doctest::Approx(3.0));
  CHECK(m.frobenius_norm() == doctest::Approx(std::sqrt(1.0 + 4.0 + 9.0)));
}

TEST_CASE("hermiticity test tolerates roundoff asymmetry only") {
  ComplexMatrix h{{Complex(1.0, 0.0), Complex(0.5, 0.25)}, {Complex(0.5, -0.25), Complex(0.0, 0.0)}};
  CHECK(h.is_hermitian(1e-10));
  h(0, 1) += Complex(0.0, 1e-6);
  CHECK_FALSE(h.is_hermitian(1e-10));
}
