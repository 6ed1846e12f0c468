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

#ifndef FORGE_SYNTHESIS_HPP
#define FORGE_SYNTHESIS_HPP

#include <utility>
#include <vector>

#include "forge/clifford.hpp"
#include "forge/pauli.hpp"

namespace forge {

// Per-qubit classification of a Pauli pair after single-qubit
// standardization.  Sets hold 0-based qubit indices, ascending:
//   a: (X, Z)  anticommuting on this qubit
//   b: (Z, I)  first operator only
//   c: (I, Z)  second operator only
//   d: (Z, Z)  both, same letter
//   e: (I, I)  neither
struct PauliPartition {
  std::vector<int> a, b, c, d, e;
};

struct StandardForm {
  // Single-qubit gates only; W^dagger O_i W has the standardized letters.
  CliffordCircuit w;
  PauliPartition partition;
};

StandardForm standard_form(const PauliString& o1, const PauliString& o2);

// For anticommuting o1, o2: builds V and a qubit q with
// V X_q V^dagger == o1 and V Z_q V^dagger == o2, signs included.
struct SingleQubitReduction {
  CliffordCircuit v;
  int qubit = 0;
};
SingleQubitReduction lemma1_synthesize(const PauliString& o1, const PauliString& o2);

// For commuting o1 != o2 (distinct letter words), neither identity: builds V
// and distinct qubits p, q with V Z_p V^dagger == o1, V Z_q V^dagger == o2.
struct TwoQubitReduction {
  CliffordCircuit v;
  int qubit_p = 0;
  int qubit_q = 0;
};
TwoQubitReduction lemma2_synthesize(const PauliString& o1, const PauliString& o2);

// One weighted Clifford operator C_j of a two-sided observable
// decomposition.  `circuit` realizes C_j exactly as a unitary (up to a global
// phase that cancels in conj(C) (x) C), and `pauli_form` is the same operator
// written as a real combination of Pauli words for dense checks.
struct WeightedClifford {
  double coefficient = 0.0;
  CliffordCircuit circuit;
  std::vector<std::pair<double, PauliString>> pauli_form;
};

// Decomposition of o1 (x) o2 + o2 (x) o1 into
//   a0/2 * ({o1,o2} (x) I + I (x) {o1,o2}) + sum_j a_j conj(C_j) (x) C_j
// with all C_j Clifford.  When the Y-letter counts of o1 and o2 have opposite
// parity no such form exists and any real same-circuit ansatz gives exactly
// zero; that case is flagged with `vanishes`.
struct HeisenbergDecomposition {
  bool vanishes = false;
  int sigma = +1;                   // (-1)^{y_count}, common to both inputs
  double a0 = 0.0;
  PauliString half_anticommutator;  // signed word o1*o2; meaningful iff a0 != 0
  std::vector<WeightedClifford> terms;
};

HeisenbergDecomposition heisenberg_decompose(const PauliString& o1,
                                             const PauliString& o2);

}  // namespace forge

#endif  // FORGE_SYNTHESIS_HPP
