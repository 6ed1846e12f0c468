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

#ifndef FORGE_PAULI_HPP
#define FORGE_PAULI_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace forge {

enum class Pauli : uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

char pauli_char(Pauli p);
Pauli pauli_from_char(char c);

// A signed tensor word of single-qubit Pauli operators, e.g. -X.X.I.Z.Y.
// The text form is a letter string with an optional sign prefix ("-XXIZY");
// the leftmost letter is qubit 1, which is the least-significant bit of a
// basis-state index.  Internally qubits are numbered from 0.
class PauliString {
 public:
  PauliString() = default;
  PauliString(std::vector<Pauli> letters, int sign = +1);

  static PauliString identity(int n_qubits);
  // Single non-identity letter at `qubit` on an n-qubit register.
  static PauliString single(int n_qubits, int qubit, Pauli p, int sign = +1);
  // Parses "[+-]<letters>" where letters are drawn from I, X, Y, Z.
  static PauliString parse(std::string_view text);

  std::string str() const;  // always sign-prefixed, e.g. "+XXIZ"

  int size() const { return static_cast<int>(letters_.size()); }
  Pauli letter(int qubit) const { return letters_[static_cast<size_t>(qubit)]; }
  void set_letter(int qubit, Pauli p) { letters_[static_cast<size_t>(qubit)] = p; }
  const std::vector<Pauli>& letters() const { return letters_; }
  int sign() const { return sign_; }
  void set_sign(int sign);
  void flip_sign() { sign_ = -sign_; }

  bool is_identity() const;       // all letters I (any sign)
  int weight() const;             // number of non-identity letters
  int y_count() const;            // number of Y letters
  PauliString unsigned_word() const;
  PauliString negated() const;

  // Support (qubit indices with non-identity letters), ascending.
  std::vector<int> support() const;

  // Parity eigenvalue of the computational basis state `bits` under a word of
  // Z-like letters: +1/-1 as the number of set bits on the support is
  // even/odd, multiplied by the sign.  Used after basis rotation.
  int parity_eigenvalue(uint64_t bits) const;

  bool operator==(const PauliString& other) const = default;

 private:
  std::vector<Pauli> letters_;
  int sign_ = +1;
};

// True when the two words commute as operators (they either commute or
// anticommute; the verdict is the parity of positions whose letters are
// distinct non-identity pairs).
bool commutes(const PauliString& a, const PauliString& b);

// Product a*b expressed as i^exponent * word, with word.sign() == +1 and the
// input signs folded into the exponent (a sign of -1 contributes i^2).
struct PauliProduct {
  int i_exponent = 0;  // 0..3
  PauliString word;
};
PauliProduct multiply(const PauliString& a, const PauliString& b);

// Product of two commuting (or otherwise phase-real) words as a signed
// PauliString; throws ContractError if the product carries a factor of +/-i.
PauliString multiply_real(const PauliString& a, const PauliString& b);

}  // namespace forge

#endif  // FORGE_PAULI_HPP
