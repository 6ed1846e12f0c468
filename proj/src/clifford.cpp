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

#include "forge/clifford.hpp"

#include <algorithm>
#include <array>

#include "forge/errors.hpp"

namespace forge {

bool clifford_is_two_qubit(CliffordGateKind kind) {
  return kind == CliffordGateKind::CNOT || kind == CliffordGateKind::CZ;
}

const char* clifford_kind_name(CliffordGateKind kind) {
  switch (kind) {
    case CliffordGateKind::H: return "H";
    case CliffordGateKind::S: return "S";
    case CliffordGateKind::Sdg: return "SDG";
    case CliffordGateKind::X: return "X";
    case CliffordGateKind::Y: return "Y";
    case CliffordGateKind::Z: return "Z";
    case CliffordGateKind::CNOT: return "CNOT";
    case CliffordGateKind::CZ: return "CZ";
  }
  return "?";
}

CliffordGate CliffordGate::inverse() const {
  CliffordGate inv = *this;
  if (kind == CliffordGateKind::S) inv.kind = CliffordGateKind::Sdg;
  else if (kind == CliffordGateKind::Sdg) inv.kind = CliffordGateKind::S;
  // All other kinds are self-inverse.
  return inv;
}

int CliffordCircuit::two_qubit_count() const {
  int count = 0;
  for (const CliffordGate& g : gates) count += g.is_two_qubit();
  return count;
}

CliffordCircuit CliffordCircuit::inverse() const {
  CliffordCircuit inv;
  inv.n_qubits = n_qubits;
  inv.gates.reserve(gates.size());
  for (auto it = gates.rbegin(); it != gates.rend(); ++it) {
    inv.gates.push_back(it->inverse());
  }
  return inv;
}

CliffordCircuit CliffordCircuit::then(const CliffordCircuit& next) const {
  if (n_qubits != next.n_qubits) throw ContractError("circuit width mismatch");
  CliffordCircuit out = *this;
  out.gates.insert(out.gates.end(), next.gates.begin(), next.gates.end());
  return out;
}

namespace {

// A Pauli word restricted to a gate's support, with an i-phase exponent.
// Support slot order is (q0) for single-qubit gates and (q0, q1) for
// two-qubit ones.
struct LocalPauli {
  std::array<Pauli, 2> letter = {Pauli::I, Pauli::I};
  int i_exponent = 0;  // mod 4
};

inline int x_bit(Pauli p) { return (p == Pauli::X || p == Pauli::Y) ? 1 : 0; }
inline int z_bit(Pauli p) { return (p == Pauli::Z || p == Pauli::Y) ? 1 : 0; }

inline Pauli letter_from_bits(int x, int z) {
  if (x && z) return Pauli::Y;
  if (x) return Pauli::X;
  if (z) return Pauli::Z;
  return Pauli::I;
}

LocalPauli local_multiply(const LocalPauli& a, const LocalPauli& b) {
  LocalPauli out;
  out.i_exponent = a.i_exponent + b.i_exponent;
  for (int slot = 0; slot < 2; ++slot) {
    int x1 = x_bit(a.letter[slot]), z1 = z_bit(a.letter[slot]);
    int x2 = x_bit(b.letter[slot]), z2 = z_bit(b.letter[slot]);
    int x3 = x1 ^ x2, z3 = z1 ^ z2;
    out.i_exponent += x1 * z1 + x2 * z2 - x3 * z3 + 2 * (z1 * x2);
    out.letter[slot] = letter_from_bits(x3, z3);
  }
  out.i_exponent = ((out.i_exponent % 4) + 4) % 4;
  return out;
}

LocalPauli make_local(Pauli a, Pauli b, int sign) {
  LocalPauli out;
  out.letter = {a, b};
  out.i_exponent = sign < 0 ? 2 : 0;
  return out;
}

// Images of the X and Z generators on each support slot under conjugation by
// the gate (g P g^dagger).
void generator_images(CliffordGateKind kind, LocalPauli imgX[2], LocalPauli imgZ[2]) {
  using K = CliffordGateKind;
  switch (kind) {
    case K::H:
      imgX[0] = make_local(Pauli::Z, Pauli::I, +1);
      imgZ[0] = make_local(Pauli::X, Pauli::I, +1);
      break;
    case K::S:
      imgX[0] = make_local(Pauli::Y, Pauli::I, +1);
      imgZ[0] = make_local(Pauli::Z, Pauli::I, +1);
      break;
    case K::Sdg:
      imgX[0] = make_local(Pauli::Y, Pauli::I, -1);
      imgZ[0] = make_local(Pauli::Z, Pauli::I, +1);
      break;
    case K::X:
      imgX[0] = make_local(Pauli::X, Pauli::I, +1);
      imgZ[0] = make_local(Pauli::Z, Pauli::I, -1);
      break;
    case K::Y:
      imgX[0] = make_local(Pauli::X, Pauli::I, -1);
      imgZ[0] = make_local(Pauli::Z, Pauli::I, -1);
      break;
    case K::Z:
      imgX[0] = make_local(Pauli::X, Pauli::I, -1);
      imgZ[0] = make_local(Pauli::Z, Pauli::I, +1);
      break;
    case K::CNOT:
      // Slot 0 = control, slot 1 = target.
      imgX[0] = make_local(Pauli::X, Pauli::X, +1);
      imgZ[0] = make_local(Pauli::Z, Pauli::I, +1);
      imgX[1] = make_local(Pauli::I, Pauli::X, +1);
      imgZ[1] = make_local(Pauli::Z, Pauli::Z, +1);
      break;
    case K::CZ:
      imgX[0] = make_local(Pauli::X, Pauli::Z, +1);
      imgZ[0] = make_local(Pauli::Z, Pauli::I, +1);
      imgX[1] = make_local(Pauli::Z, Pauli::X, +1);
      imgZ[1] = make_local(Pauli::I, Pauli::Z, +1);
      break;
  }
}

}  // namespace

PauliString conjugate_gate(const CliffordGate& gate, const PauliString& p) {
  int slots = gate.is_two_qubit() ? 2 : 1;
  std::array<int, 2> qubits = {gate.q0, gate.q1};
  for (int s = 0; s < slots; ++s) {
    if (qubits[static_cast<size_t>(s)] < 0 || qubits[static_cast<size_t>(s)] >= p.size()) {
      throw ContractError("clifford gate qubit out of range");
    }
  }

  LocalPauli imgX[2], imgZ[2];
  generator_images(gate.kind, imgX, imgZ);

  // Decompose the affected letters as i^{xz} X^x Z^z per slot, then multiply
  // the mapped generators back together.
  LocalPauli acc = make_local(Pauli::I, Pauli::I, +1);
  for (int s = 0; s < slots; ++s) {
    Pauli letter = p.letter(qubits[static_cast<size_t>(s)]);
    int x = x_bit(letter), z = z_bit(letter);
    acc.i_exponent += x * z;  // prefactor of the X^x Z^z decomposition
    if (x) acc = local_multiply(acc, imgX[s]);
    if (z) acc = local_multiply(acc, imgZ[s]);
  }
  acc.i_exponent = ((acc.i_exponent % 4) + 4) % 4;
  if (acc.i_exponent % 2 != 0) {
    throw ContractError("clifford conjugation produced an imaginary phase");
  }

  PauliString out = p;
  for (int s = 0; s < slots; ++s) {
    out.set_letter(qubits[static_cast<size_t>(s)], acc.letter[static_cast<size_t>(s)]);
  }
  if (acc.i_exponent == 2) out.flip_sign();
  return out;
}

PauliString conjugate(const CliffordCircuit& circuit, const PauliString& p) {
  if (circuit.n_qubits != p.size()) throw ContractError("pauli/circuit width mismatch");
  PauliString out = p;
  for (const CliffordGate& g : circuit.gates) out = conjugate_gate(g, out);
  return out;
}

PauliString conjugate_adjoint(const CliffordCircuit& circuit, const PauliString& p) {
  return conjugate(circuit.inverse(), p);
}

}  // namespace forge
