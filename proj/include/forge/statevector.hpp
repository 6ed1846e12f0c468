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

#ifndef FORGE_STATEVECTOR_HPP
#define FORGE_STATEVECTOR_HPP

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "forge/circuit.hpp"
#include "forge/pauli.hpp"

namespace forge {

// Dense amplitude vector over n qubits.  Qubit i is bit i of the basis-state
// index, so qubit 0 is the least-significant bit.
class Statevector {
 public:
  Statevector() = default;
  explicit Statevector(int n_qubits);  // |0...0>
  static Statevector basis_state(int n_qubits, uint64_t index);
  static Statevector from_amplitudes(int n_qubits,
                                     std::vector<std::complex<double>> amps);

  int n_qubits() const { return n_qubits_; }
  uint64_t dim() const { return uint64_t{1} << n_qubits_; }
  const std::vector<std::complex<double>>& amplitudes() const { return amps_; }
  std::vector<std::complex<double>>& amplitudes() { return amps_; }
  std::complex<double> amplitude(uint64_t index) const {
    return amps_[index];
  }

  double norm() const;
  // Largest |imag| across amplitudes; used to confirm real-circuit outputs.
  double max_imag() const;

 private:
  int n_qubits_ = 0;
  std::vector<std::complex<double>> amps_;
};

void apply_gate_in_place(Statevector& state, const Gate& gate);
void apply_circuit_in_place(Statevector& state, const Circuit& circuit);
Statevector apply_circuit(const Statevector& state, const Circuit& circuit);

// <state| P |state> for a signed Pauli word; always real for Hermitian P.
double pauli_expectation(const Statevector& state, const PauliString& p);

// Bitstring text helpers; leftmost character is qubit 1 (the LSB).
std::string bits_to_string(uint64_t bits, int n_qubits);
uint64_t bits_from_string(std::string_view text);

// Circuit that measures `p` in the computational basis: H for X letters,
// S^dagger then H for Y letters.  After running it, parity_eigenvalue of the
// measured bitstring (restricted to the support of p) gives the outcome.
Circuit measurement_basis_circuit(const PauliString& p);

}  // namespace forge

#endif  // FORGE_STATEVECTOR_HPP
