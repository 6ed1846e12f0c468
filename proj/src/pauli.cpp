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

#include "forge/pauli.hpp"

#include <bit>

#include "forge/errors.hpp"

namespace forge {

char pauli_char(Pauli p) {
  switch (p) {
    case Pauli::I: return 'I';
    case Pauli::X: return 'X';
    case Pauli::Y: return 'Y';
    case Pauli::Z: return 'Z';
  }
  return '?';
}

Pauli pauli_from_char(char c) {
  switch (c) {
    case 'I': return Pauli::I;
    case 'X': return Pauli::X;
    case 'Y': return Pauli::Y;
    case 'Z': return Pauli::Z;
    default:
      throw InputError(std::string("invalid pauli letter '") + c + "'");
  }
}

namespace {

// Symplectic (x, z) bit pair of a letter; Y carries both bits.
inline int x_bit(Pauli p) { return (p == Pauli::X || p == Pauli::Y) ? 1 : 0; }
inline int z_bit(Pauli p) { return (p == Pauli::Z || p == Pauli::Y) ? 1 : 0; }

inline Pauli letter_from_bits(int x, int z) {
  if (x && z) return Pauli::Y;
  if (x) return Pauli::X;
  if (z) return Pauli::Z;
  return Pauli::I;
}

}  // namespace

PauliString::PauliString(std::vector<Pauli> letters, int sign)
    : letters_(std::move(letters)) {
  set_sign(sign);
}

void PauliString::set_sign(int sign) {
  if (sign != 1 && sign != -1) throw InputError("pauli sign must be +1 or -1");
  sign_ = sign;
}

PauliString PauliString::identity(int n_qubits) {
  if (n_qubits < 0) throw InputError("negative register size");
  return PauliString(std::vector<Pauli>(static_cast<size_t>(n_qubits), Pauli::I));
}

PauliString PauliString::single(int n_qubits, int qubit, Pauli p, int sign) {
  if (qubit < 0 || qubit >= n_qubits) throw InputError("pauli qubit out of range");
  PauliString result = identity(n_qubits);
  result.set_letter(qubit, p);
  result.set_sign(sign);
  return result;
}

PauliString PauliString::parse(std::string_view text) {
  int sign = +1;
  if (!text.empty() && (text.front() == '+' || text.front() == '-')) {
    sign = text.front() == '-' ? -1 : +1;
    text.remove_prefix(1);
  }
  if (text.empty()) throw InputError("empty pauli string");
  std::vector<Pauli> letters;
  letters.reserve(text.size());
  for (char c : text) letters.push_back(pauli_from_char(c));
  return PauliString(std::move(letters), sign);
}

std::string PauliString::str() const {
  std::string out;
  out.reserve(letters_.size() + 1);
  out.push_back(sign_ < 0 ? '-' : '+');
  for (Pauli p : letters_) out.push_back(pauli_char(p));
  return out;
}

bool PauliString::is_identity() const {
  for (Pauli p : letters_) {
    if (p != Pauli::I) return false;
  }
  return true;
}

int PauliString::weight() const {
  int w = 0;
  for (Pauli p : letters_) w += (p != Pauli::I);
  return w;
}

int PauliString::y_count() const {
  int w = 0;
  for (Pauli p : letters_) w += (p == Pauli::Y);
  return w;
}

PauliString PauliString::unsigned_word() const {
  return PauliString(letters_, +1);
}

PauliString PauliString::negated() const {
  return PauliString(letters_, -sign_);
}

std::vector<int> PauliString::support() const {
  std::vector<int> out;
  for (int q = 0; q < size(); ++q) {
    if (letter(q) != Pauli::I) out.push_back(q);
  }
  return out;
}

int PauliString::parity_eigenvalue(uint64_t bits) const {
  uint64_t mask = 0;
  for (int q = 0; q < size(); ++q) {
    if (letter(q) != Pauli::I) mask |= (uint64_t{1} << q);
  }
  int parity = std::popcount(bits & mask) & 1;
  return sign_ * (parity ? -1 : +1);
}

bool commutes(const PauliString& a, const PauliString& b) {
  if (a.size() != b.size()) throw ContractError("pauli length mismatch");
  int anti = 0;
  for (int q = 0; q < a.size(); ++q) {
    Pauli pa = a.letter(q);
    Pauli pb = b.letter(q);
    if (pa != Pauli::I && pb != Pauli::I && pa != pb) anti ^= 1;
  }
  return anti == 0;
}

PauliProduct multiply(const PauliString& a, const PauliString& b) {
  if (a.size() != b.size()) throw ContractError("pauli length mismatch");
  int exponent = 0;
  if (a.sign() < 0) exponent += 2;
  if (b.sign() < 0) exponent += 2;
  std::vector<Pauli> letters(static_cast<size_t>(a.size()), Pauli::I);
  for (int q = 0; q < a.size(); ++q) {
    int x1 = x_bit(a.letter(q)), z1 = z_bit(a.letter(q));
    int x2 = x_bit(b.letter(q)), z2 = z_bit(b.letter(q));
    int x3 = x1 ^ x2, z3 = z1 ^ z2;
    // With the convention P = i^{xz} X^x Z^z, the product picks up
    // i^{x1 z1 + x2 z2 - x3 z3} (-1)^{z1 x2} on each qubit.
    exponent += x1 * z1 + x2 * z2 - x3 * z3 + 2 * (z1 * x2);
    letters[static_cast<size_t>(q)] = letter_from_bits(x3, z3);
  }
  exponent = ((exponent % 4) + 4) % 4;
  return PauliProduct{exponent, PauliString(std::move(letters), +1)};
}

PauliString multiply_real(const PauliString& a, const PauliString& b) {
  PauliProduct prod = multiply(a, b);
  if (prod.i_exponent % 2 != 0) {
    throw ContractError("pauli product carries an imaginary phase");
  }
  if (prod.i_exponent == 2) return prod.word.negated();
  return prod.word;
}

}  // namespace forge
