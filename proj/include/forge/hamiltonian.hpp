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

#ifndef FORGE_HAMILTONIAN_HPP
#define FORGE_HAMILTONIAN_HPP

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "forge/pauli.hpp"

namespace forge {

// One weighted Pauli word; the word always carries sign +1 (any sign from the
// text form is folded into the coefficient).
struct HamiltonianTerm {
  double coefficient = 0.0;
  PauliString word;
};

// Real-coefficient Pauli-sum operator on a bipartite register: the first
// `partition` qubits form the left half, the rest the right half.
class Hamiltonian {
 public:
  Hamiltonian() = default;
  Hamiltonian(int n_qubits, int partition, std::vector<HamiltonianTerm> terms);

  int n_qubits() const { return n_qubits_; }
  int partition() const { return partition_; }
  const std::vector<HamiltonianTerm>& terms() const { return terms_; }

  // Left/right factors of one term, as length-partition strings with sign +1.
  std::pair<PauliString, PauliString> split(int term_index) const;

  // True when every split factor has an even Y count, i.e. both halves of
  // every term are real-valued matrices in the computational basis.
  bool real_split_factors() const;

  // Text form.  Header "qubits <2n> partition <n>", optional line
  // "manifest <terms> <checksum>", then "coefficient word" lines; '#' starts
  // a comment.  parse(str()) reproduces str() byte for byte.
  static Hamiltonian parse(std::string_view text);
  std::string str() const;

  // FNV-1a over the canonical term lines; the value the manifest line pins.
  uint64_t checksum() const;
  bool has_manifest() const { return has_manifest_; }
  void set_manifest(bool on) { has_manifest_ = on; }

 private:
  int n_qubits_ = 0;
  int partition_ = 0;
  bool has_manifest_ = false;
  std::vector<HamiltonianTerm> terms_;
};

}  // namespace forge

#endif  // FORGE_HAMILTONIAN_HPP
