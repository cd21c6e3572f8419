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

#include "ctcsim/gates.hpp"

#include <cmath>
#include <cstdlib>
#include <vector>

namespace ctcsim {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

struct Cursor {
  const std::string& text;
  std::size_t pos = 0;

  bool done() const { return pos >= text.size(); }
  char peek() const { return done() ? '\0' : text[pos]; }
  char peek_at(std::size_t ahead) const {
    return pos + ahead >= text.size() ? '\0' : text[pos + ahead];
  }

  void skip_ws() {
    while (!done() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
  }

  void expect(char c) {
    skip_ws();
    if (peek() != c) {
      throw ParseError(std::string("expected '") + c + "'", pos);
    }
    ++pos;
  }

  bool try_consume(char c) {
    skip_ws();
    if (peek() == c) {
      ++pos;
      return true;
    }
    return false;
  }

  double real_number() {
    skip_ws();
    const char* start = text.c_str() + pos;
    char* end = nullptr;
    const double value = std::strtod(start, &end);
    if (end == start) throw ParseError("expected a number", pos);
    pos += static_cast<std::size_t>(end - start);
    return value;
  }

  void expect_end() {
    skip_ws();
    if (!done()) throw ParseError("trailing input", pos);
  }
};

Complex parse_complex(Cursor& cur) {
  cur.expect('[');
  const double re = cur.real_number();
  cur.expect(',');
  const double im = cur.real_number();
  cur.expect(']');
  return Complex(re, im);
}

// MATRIX := "[" row (";" row)* "]", row := complex ("," complex)*, where a
// row may additionally be wrapped in its own brackets. A row opener is told
// apart from a complex opener by one character of lookahead: "[[" starts a
// wrapped row, "[<number>" starts a complex.
std::vector<std::vector<Complex>> parse_matrix_rows(Cursor& cur) {
  cur.expect('[');
  std::vector<std::vector<Complex>> rows;
  while (true) {
    cur.skip_ws();
    bool wrapped = false;
    if (cur.peek() == '[') {
      std::size_t ahead = 1;
      while (cur.peek_at(ahead) == ' ' || cur.peek_at(ahead) == '\t') ++ahead;
      if (cur.peek_at(ahead) == '[') {
        wrapped = true;
        cur.expect('[');
      }
    }
    std::vector<Complex> row;
    row.push_back(parse_complex(cur));
    while (cur.try_consume(',')) row.push_back(parse_complex(cur));
    if (wrapped) cur.expect(']');
    rows.push_back(std::move(row));
    if (!cur.try_consume(';')) break;
  }
  cur.expect(']');
  return rows;
}

Unitary matrix_literal(Cursor& cur) {
  const auto rows = parse_matrix_rows(cur);
  cur.expect_end();
  const std::size_t n = rows.size();
  for (const auto& row : rows) {
    if (row.size() != n) throw ParseError("matrix literal is not square", cur.pos);
  }
  ComplexMatrix m(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) m(r, c) = rows[r][c];
  }
  const double resid = m.unitarity_residual();
  if (resid > 1e-10) {
    throw std::invalid_argument("matrix literal is not unitary: |U†U - I|_max = " +
                                std::to_string(resid));
  }
  std::vector<std::size_t> dims;
  if (n == 2) {
    dims = {2};
  } else if (n == 4) {
    dims = {2, 2};
  } else {
    throw ParseError("matrix literal side must be 2 or 4", 0);
  }
  return Unitary(std::move(m), std::move(dims));
}

ComplexMatrix permutation_gate(const std::vector<std::size_t>& image) {
  ComplexMatrix m(image.size(), image.size());
  for (std::size_t in = 0; in < image.size(); ++in) m(image[in], in) = 1.0;
  return m;
}

}  // namespace

Unitary build_gate(const std::string& spec) {
  Cursor cur{spec};
  cur.skip_ws();

  const std::size_t name_start = cur.pos;
  while (!cur.done() && (std::isalnum(static_cast<unsigned char>(cur.peek())) || cur.peek() == '_')) {
    ++cur.pos;
  }
  const std::string name = spec.substr(name_start, cur.pos - name_start);
  if (name.empty()) throw ParseError("expected a gate name", name_start);

  if (name == "matrix") {
    cur.expect(':');
    return matrix_literal(cur);
  }
  if (name == "identity") {
    cur.expect_end();
    return Unitary(ComplexMatrix::identity(4), {2, 2});
  }
  if (name == "x") {
    cur.expect_end();
    return Unitary({{0.0, 1.0}, {1.0, 0.0}}, {2});
  }
  if (name == "h") {
    cur.expect_end();
    return Unitary({{kInvSqrt2, kInvSqrt2}, {kInvSqrt2, -kInvSqrt2}}, {2});
  }
  if (name == "rx") {
    cur.expect('(');
    const double theta = cur.real_number();
    cur.expect(')');
    cur.expect_end();
    const double c = std::cos(theta / 2.0);
    const Complex ms(0.0, -std::sin(theta / 2.0));
    return Unitary({{Complex(c, 0.0), ms}, {ms, Complex(c, 0.0)}}, {2});
  }
  if (name == "swap") {
    cur.expect_end();
    return Unitary(permutation_gate({0, 2, 1, 3}), {2, 2});
  }
  if (name == "cnot") {
    cur.expect_end();
    return Unitary(permutation_gate({0, 1, 3, 2}), {2, 2});
  }
  if (name == "cnot_rev") {
    cur.expect_end();
    return Unitary(permutation_gate({0, 3, 2, 1}), {2, 2});
  }
  if (name == "grandfather") {
    // swap, then X on slot 1: |s,c> -> |c, 1-s>
    cur.expect_end();
    return Unitary(permutation_gate({1, 3, 0, 2}), {2, 2});
  }
  throw ParseError("unknown gate name '" + name + "'", name_start);
}

PureState parse_state(const std::string& spec, std::string* warning) {
  Cursor cur{spec};
  cur.skip_ws();

  auto single = [&](Complex a0, Complex a1) {
    return PureState({a0, a1}, {2});
  };

  if (spec.rfind("amps:", cur.pos) == cur.pos) {
    cur.pos += 5;
    cur.expect('[');
    std::vector<Complex> amps;
    amps.push_back(parse_complex(cur));
    while (cur.try_consume(',')) amps.push_back(parse_complex(cur));
    cur.expect(']');
    cur.expect_end();

    double n2 = 0.0;
    for (const auto& a : amps) n2 += std::norm(a);
    const double norm = std::sqrt(n2);
    if (norm <= 1e-12) throw ParseError("amplitude vector has zero norm", 0);
    if (std::abs(norm - 1.0) > 1e-6 && warning != nullptr) {
      *warning += "state '" + spec + "' renormalized (input norm " + std::to_string(norm) + ")";
    }
    for (auto& a : amps) a /= norm;

    std::vector<std::size_t> dims;
    switch (amps.size()) {
      case 2: dims = {2}; break;
      case 3: dims = {3}; break;
      case 4: dims = {2, 2}; break;
      default:
        throw ParseError("unsupported amplitude vector length " + std::to_string(amps.size()), 0);
    }
    return PureState(std::move(amps), std::move(dims));
  }

  const std::string body = spec.substr(cur.pos);
  if (body == "0") return single(1.0, 0.0);
  if (body == "1") return single(0.0, 1.0);
  if (body == "+") return single(kInvSqrt2, kInvSqrt2);
  if (body == "-") return single(kInvSqrt2, -kInvSqrt2);
  if (body == "bell:phi+") {
    return PureState({kInvSqrt2, 0.0, 0.0, kInvSqrt2}, {2, 2});
  }
  throw ParseError("unknown state '" + body + "'", cur.pos);
}

}  // namespace ctcsim
