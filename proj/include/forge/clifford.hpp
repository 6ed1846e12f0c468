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

#ifndef FORGE_CLIFFORD_HPP
#define FORGE_CLIFFORD_HPP

#include <vector>

#include "forge/pauli.hpp"

namespace forge {

enum class CliffordGateKind { H, S, Sdg, X, Y, Z, CNOT, CZ };

bool clifford_is_two_qubit(CliffordGateKind kind);
const char* clifford_kind_name(CliffordGateKind kind);

struct CliffordGate {
  CliffordGateKind kind;
  int q0 = 0;
  int q1 = -1;  // second qubit for CNOT (target) and CZ

  bool is_two_qubit() const { return clifford_is_two_qubit(kind); }
  CliffordGate inverse() const;
};

// A gate list applied in order: gates[0] acts on the state first, so the
// circuit's operator is gates[m-1] * ... * gates[0].
struct CliffordCircuit {
  int n_qubits = 0;
  std::vector<CliffordGate> gates;

  // Count of entangling gates (CNOT and CZ alike).
  int two_qubit_count() const;
  CliffordCircuit inverse() const;
  // this, then `next` (concatenation in application order).
  CliffordCircuit then(const CliffordCircuit& next) const;
};

// Image of P under conjugation by a single gate g:  g P g^dagger.
PauliString conjugate_gate(const CliffordGate& gate, const PauliString& p);

// C P C^dagger for the whole circuit (C = product of the gates in
// application order).
PauliString conjugate(const CliffordCircuit& circuit, const PauliString& p);

// C^dagger P C.
PauliString conjugate_adjoint(const CliffordCircuit& circuit, const PauliString& p);

}  // namespace forge

#endif  // FORGE_CLIFFORD_HPP
