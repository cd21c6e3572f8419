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

#ifndef CTCSIM_GATES_HPP
#define CTCSIM_GATES_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

#include "ctcsim/states.hpp"

namespace ctcsim {

/// Parse failure in a gate or state string; carries the offending position.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " (at position " + std::to_string(position) + ")"),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Builds a unitary from a gate string:
///   identity | x | h | swap | cnot | cnot_rev | grandfather | rx(<angle>) |
///   matrix:[[re,im],...;...]
/// Two-slot gates carry the (system, CTC) convention with big-endian index
/// s*2 + c. "cnot" has control on slot 0, "cnot_rev" on slot 1.
/// "grandfather" is swap followed by X on slot 1. Matrix literals of side 2
/// or 4 are accepted; rows may be written bare ([a,b],[c,d];...) or wrapped
/// ([[a,b],[c,d]];...). Non-unitary literals are rejected with the residual.
Unitary build_gate(const std::string& spec);

/// Parses a state string: "0" | "1" | "+" | "-" | "bell:phi+" | "amps:[...]".
/// Amplitude vectors are normalized; when the input norm is off by more than
/// 1e-6 a note is appended to *warning (when given).
PureState parse_state(const std::string& spec, std::string* warning = nullptr);

}  // namespace ctcsim

#endif
