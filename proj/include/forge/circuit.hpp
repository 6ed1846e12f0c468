// Copyright 2026 The forgesim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FORGE_CIRCUIT_HPP
#define FORGE_CIRCUIT_HPP

#include <array>
#include <complex>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "forge/clifford.hpp"

namespace forge {

enum class GateKind {
  X, Y, Z, H, S, Sdg,      // fixed single-qubit gates
  RY, RZ,                  // rotations, angle in radians
  CNOT, CZ, SWAP,          // fixed two-qubit gates
  Hop,                     // particle-conserving givens + |11> phase of -1
  ModHop,                  // hop variant leaving |11> untouched
};

const char* gate_kind_name(GateKind kind);
bool gate_is_two_qubit(GateKind kind);
bool gate_has_angle(GateKind kind);

struct Gate {
  GateKind kind = GateKind::X;
  int q0 = 0;
  int q1 = -1;        // second qubit for two-qubit kinds
  double angle = 0.0;
  int param = -1;     // >= 0: slot index into Circuit::param_names

  bool is_two_qubit() const { return gate_is_two_qubit(kind); }
  bool has_angle() const { return gate_has_angle(kind); }
  Gate inverse() const;  // requires param < 0

  bool operator==(const Gate& other) const = default;

  static Gate one(GateKind kind, int q, double angle = 0.0) {
    Gate g;
    g.kind = kind;
    g.q0 = q;
    g.angle = angle;
    return g;
  }
  static Gate two(GateKind kind, int q0, int q1, double angle = 0.0) {
    Gate g;
    g.kind = kind;
    g.q0 = q0;
    g.q1 = q1;
    g.angle = angle;
    return g;
  }
};

// 2x2 or 4x4 unitary of a bound gate.  Two-qubit matrices are indexed by
// 2*bit(q0) + bit(q1).
std::array<std::complex<double>, 4> gate_matrix_1q(const Gate& g);
std::array<std::complex<double>, 16> gate_matrix_2q(const Gate& g);

// A gate list applied in order (gates[0] first).  Angles may reference named
// parameter slots; such circuits must be bound before execution.
struct Circuit {
  int n_qubits = 0;
  std::vector<Gate> gates;
  std::vector<std::string> param_names;

  int gate_count() const { return static_cast<int>(gates.size()); }
  int two_qubit_count() const;
  bool has_unbound_params() const;
  // Substitutes values (one per param slot, in order) into a parameter-free
  // circuit.
  Circuit bound(std::span<const double> values) const;
  Circuit inverse() const;
  Circuit then(const Circuit& next) const;
  // True when every gate matrix is real-valued (entries with |imag| <= tol).
  bool is_real(double tol = 1e-10) const;

  // Text form: one gate per line, "KIND q1 [q2] [angle]"; '#' starts a
  // comment; qubit numbers are 1-based in text.  Angles may be literals or
  // "$name" parameter references.
  static Circuit parse(std::string_view text, int n_qubits);
  std::string str() const;

  bool operator==(const Circuit& other) const = default;
};

// Appends each gate as G G^-1 G, tripling the executed gate count while
// leaving the overall unitary unchanged.  `factor` must be odd and >= 1;
// factor f emits f copies per gate (G, then (f-1)/2 rounds of G^-1 G).
Circuit fold_circuit(const Circuit& circuit, int factor = 3);

// True when every two-qubit gate acts on a pair present in `edges`
// (unordered adjacency, 0-based).
bool check_line_layout(const Circuit& circuit,
                       std::span<const std::pair<int, int>> edges);

// Lifts a Clifford-only circuit into the simulator gate set.
Circuit from_clifford(const CliffordCircuit& c);

}  // namespace forge

#endif  // FORGE_CIRCUIT_HPP
