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

#include "forge/statevector.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>

#include "forge/errors.hpp"

namespace forge {

Statevector::Statevector(int n_qubits) : n_qubits_(n_qubits) {
  if (n_qubits < 0 || n_qubits > 30) {
    throw ContractError("statevector qubit count out of range: " +
                        std::to_string(n_qubits));
  }
  amps_.assign(uint64_t{1} << n_qubits, {0.0, 0.0});
  amps_[0] = {1.0, 0.0};
}

Statevector Statevector::basis_state(int n_qubits, uint64_t index) {
  Statevector s(n_qubits);
  if (index >= s.dim()) {
    throw ContractError("basis state index out of range");
  }
  s.amps_[0] = {0.0, 0.0};
  s.amps_[index] = {1.0, 0.0};
  return s;
}

Statevector Statevector::from_amplitudes(
    int n_qubits, std::vector<std::complex<double>> amps) {
  Statevector s(n_qubits);
  if (amps.size() != s.dim()) {
    throw ContractError("amplitude vector has wrong dimension");
  }
  s.amps_ = std::move(amps);
  return s;
}

double Statevector::norm() const {
  double total = 0.0;
  for (const auto& a : amps_) {
    total += std::norm(a);
  }
  return std::sqrt(total);
}

double Statevector::max_imag() const {
  double worst = 0.0;
  for (const auto& a : amps_) {
    worst = std::max(worst, std::abs(a.imag()));
  }
  return worst;
}

namespace {

void apply_matrix_1q(std::vector<std::complex<double>>& amps, int n_qubits,
                     int q, const std::array<std::complex<double>, 4>& m) {
  const uint64_t mask = uint64_t{1} << q;
  const uint64_t lo_mask = mask - 1;
  const uint64_t hi_mask = ~lo_mask;
  const uint64_t half = uint64_t{1} << (n_qubits - 1);
  for (uint64_t i = 0; i < half; ++i) {
    const uint64_t i0 = ((i & hi_mask) << 1) | (i & lo_mask);
    const uint64_t i1 = i0 | mask;
    const std::complex<double> a0 = amps[i0];
    const std::complex<double> a1 = amps[i1];
    amps[i0] = m[0] * a0 + m[1] * a1;
    amps[i1] = m[2] * a0 + m[3] * a1;
  }
}

void apply_matrix_2q(std::vector<std::complex<double>>& amps, int n_qubits,
                     int q0, int q1, const std::array<std::complex<double>, 16>& m) {
  // Submatrix index convention: 2*bit(q0) + bit(q1).
  const uint64_t mask0 = uint64_t{1} << q0;
  const uint64_t mask1 = uint64_t{1} << q1;
  const int lo_q = std::min(q0, q1);
  const int hi_q = std::max(q0, q1);
  const uint64_t lo_mask = (uint64_t{1} << lo_q) - 1;
  const uint64_t mid_mask = ((uint64_t{1} << (hi_q - 1)) - 1) & ~lo_mask;
  const uint64_t hi_mask = ~((uint64_t{1} << (hi_q - 1)) - 1);
  const uint64_t quarter = uint64_t{1} << (n_qubits - 2);
  for (uint64_t i = 0; i < quarter; ++i) {
    const uint64_t base = ((i & hi_mask) << 2) | ((i & mid_mask) << 1) |
                          (i & lo_mask);
    const uint64_t idx[4] = {base, base | mask1, base | mask0,
                             base | mask0 | mask1};
    std::complex<double> in[4];
    for (int k = 0; k < 4; ++k) {
      in[k] = amps[idx[k]];
    }
    for (int r = 0; r < 4; ++r) {
      std::complex<double> acc{0.0, 0.0};
      for (int c = 0; c < 4; ++c) {
        acc += m[4 * r + c] * in[c];
      }
      amps[idx[r]] = acc;
    }
  }
}

}  // namespace

void apply_gate_in_place(Statevector& state, const Gate& gate) {
  if (gate.param >= 0) {
    throw ContractError("cannot apply a gate with an unbound parameter");
  }
  auto& amps = state.amplitudes();
  const int n = state.n_qubits();
  if (gate.q0 < 0 || gate.q0 >= n ||
      (gate.is_two_qubit() && (gate.q1 < 0 || gate.q1 >= n))) {
    throw ContractError("gate qubit index out of range");
  }
  // Fast paths for the permutation/phase gates keep deep circuits cheap.
  switch (gate.kind) {
    case GateKind::X: {
      const uint64_t mask = uint64_t{1} << gate.q0;
      const uint64_t lo_mask = mask - 1;
      const uint64_t hi_mask = ~lo_mask;
      const uint64_t half = uint64_t{1} << (n - 1);
      for (uint64_t i = 0; i < half; ++i) {
        const uint64_t i0 = ((i & hi_mask) << 1) | (i & lo_mask);
        std::swap(amps[i0], amps[i0 | mask]);
      }
      return;
    }
    case GateKind::Z: {
      const uint64_t mask = uint64_t{1} << gate.q0;
      for (uint64_t i = 0; i < state.dim(); ++i) {
        if (i & mask) {
          amps[i] = -amps[i];
        }
      }
      return;
    }
    case GateKind::CNOT: {
      const uint64_t cmask = uint64_t{1} << gate.q0;
      const uint64_t tmask = uint64_t{1} << gate.q1;
      for (uint64_t i = 0; i < state.dim(); ++i) {
        if ((i & cmask) && !(i & tmask)) {
          std::swap(amps[i], amps[i | tmask]);
        }
      }
      return;
    }
    case GateKind::CZ: {
      const uint64_t both = (uint64_t{1} << gate.q0) | (uint64_t{1} << gate.q1);
      for (uint64_t i = 0; i < state.dim(); ++i) {
        if ((i & both) == both) {
          amps[i] = -amps[i];
        }
      }
      return;
    }
    default:
      break;
  }
  if (gate.is_two_qubit()) {
    apply_matrix_2q(amps, n, gate.q0, gate.q1, gate_matrix_2q(gate));
  } else {
    apply_matrix_1q(amps, n, gate.q0, gate_matrix_1q(gate));
  }
}

void apply_circuit_in_place(Statevector& state, const Circuit& circuit) {
  if (circuit.n_qubits != state.n_qubits()) {
    throw ContractError("circuit and state qubit counts differ");
  }
  if (circuit.has_unbound_params()) {
    throw ContractError("cannot apply a circuit with unbound parameters");
  }
  for (const Gate& g : circuit.gates) {
    apply_gate_in_place(state, g);
  }
}

Statevector apply_circuit(const Statevector& state, const Circuit& circuit) {
  Statevector out = state;
  apply_circuit_in_place(out, circuit);
  return out;
}

double pauli_expectation(const Statevector& state, const PauliString& p) {
  if (p.size() != state.n_qubits()) {
    throw ContractError("pauli and state qubit counts differ");
  }
  // P|i> = phase(i) |i ^ flip_mask>, with phase built from Z/Y bit parities.
  uint64_t flip_mask = 0;
  uint64_t z_mask = 0;  // letters contributing (-1)^bit: Z and Y
  int y_count = 0;
  for (int q = 0; q < p.size(); ++q) {
    switch (p.letter(q)) {
      case Pauli::I:
        break;
      case Pauli::X:
        flip_mask |= uint64_t{1} << q;
        break;
      case Pauli::Y:
        flip_mask |= uint64_t{1} << q;
        z_mask |= uint64_t{1} << q;
        ++y_count;
        break;
      case Pauli::Z:
        z_mask |= uint64_t{1} << q;
        break;
    }
  }
  // Y = i X Z applied per qubit: P = i^y * (X part) * (Z part), where the Z
  // part acts first.  On |i>: phase = i^y * (-1)^{popcount(i & z_mask)}.
  std::complex<double> y_phase{1.0, 0.0};
  switch (y_count % 4) {
    case 0: y_phase = {1.0, 0.0}; break;
    case 1: y_phase = {0.0, 1.0}; break;
    case 2: y_phase = {-1.0, 0.0}; break;
    case 3: y_phase = {0.0, -1.0}; break;
  }
  const auto& amps = state.amplitudes();
  std::complex<double> acc{0.0, 0.0};
  for (uint64_t i = 0; i < state.dim(); ++i) {
    const double sign =
        (std::popcount(i & z_mask) & 1) ? -1.0 : 1.0;
    acc += std::conj(amps[i ^ flip_mask]) * (sign * amps[i]);
  }
  acc *= y_phase * static_cast<double>(p.sign());
  return acc.real();
}

std::string bits_to_string(uint64_t bits, int n_qubits) {
  std::string out(static_cast<size_t>(n_qubits), '0');
  for (int q = 0; q < n_qubits; ++q) {
    if (bits & (uint64_t{1} << q)) {
      out[static_cast<size_t>(q)] = '1';
    }
  }
  return out;
}

uint64_t bits_from_string(std::string_view text) {
  if (text.empty() || text.size() > 64) {
    throw InputError("bitstring must have between 1 and 64 characters");
  }
  uint64_t bits = 0;
  for (size_t q = 0; q < text.size(); ++q) {
    if (text[q] == '1') {
      bits |= uint64_t{1} << q;
    } else if (text[q] != '0') {
      throw InputError("bitstring may only contain '0' and '1': " +
                       std::string(text));
    }
  }
  return bits;
}

Circuit measurement_basis_circuit(const PauliString& p) {
  Circuit c;
  c.n_qubits = p.size();
  for (int q = 0; q < p.size(); ++q) {
    switch (p.letter(q)) {
      case Pauli::X:
        c.gates.push_back(Gate::one(GateKind::H, q));
        break;
      case Pauli::Y:
        c.gates.push_back(Gate::one(GateKind::Sdg, q));
        c.gates.push_back(Gate::one(GateKind::H, q));
        break;
      default:
        break;
    }
  }
  return c;
}

}  // namespace forge
