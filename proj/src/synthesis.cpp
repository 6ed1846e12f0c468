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

#include "forge/synthesis.hpp"

#include <algorithm>
#include <cmath>

#include "forge/errors.hpp"

namespace forge {

namespace {

// ---------------------------------------------------------------------------
// Single-qubit standardization words.
//
// Each qubit of a Pauli pair is brought to one of the canonical letter pairs
// (X,Z), (Z,I), (I,Z), (Z,Z), (I,I) by a one-qubit Clifford.  Words over
// {H, S} are enumerated shortest-first (H before S within a length), and the
// first word whose forward conjugation maps the letters onto the canonical
// pair, signs ignored, wins.  The enumeration order is fixed, so synthesis is
// deterministic.
// ---------------------------------------------------------------------------

Pauli conj_letter_through_word(const std::vector<CliffordGateKind>& word, Pauli p,
                               int* sign_out) {
  PauliString s = PauliString::single(1, 0, p);
  for (CliffordGateKind kind : word) {
    s = conjugate_gate(CliffordGate{kind, 0, -1}, s);
  }
  if (sign_out != nullptr) *sign_out = s.sign();
  return s.letter(0);
}

std::vector<CliffordGateKind> find_standardization_word(Pauli l1, Pauli l2,
                                                        Pauli t1, Pauli t2) {
  for (int length = 0; length <= 5; ++length) {
    for (int bits = 0; bits < (1 << length); ++bits) {
      std::vector<CliffordGateKind> word;
      word.reserve(static_cast<size_t>(length));
      for (int i = 0; i < length; ++i) {
        word.push_back(((bits >> i) & 1) ? CliffordGateKind::S : CliffordGateKind::H);
      }
      bool ok1 = (l1 == Pauli::I) ? (t1 == Pauli::I)
                                  : conj_letter_through_word(word, l1, nullptr) == t1;
      bool ok2 = (l2 == Pauli::I) ? (t2 == Pauli::I)
                                  : conj_letter_through_word(word, l2, nullptr) == t2;
      if (ok1 && ok2) return word;
    }
  }
  throw ContractError("no single-qubit standardization word found");
}

struct CanonicalTarget {
  Pauli t1, t2;
  char bucket;  // 'a'..'e'
};

CanonicalTarget classify(Pauli l1, Pauli l2) {
  if (l1 == Pauli::I && l2 == Pauli::I) return {Pauli::I, Pauli::I, 'e'};
  if (l2 == Pauli::I) return {Pauli::Z, Pauli::I, 'b'};
  if (l1 == Pauli::I) return {Pauli::I, Pauli::Z, 'c'};
  if (l1 == l2) return {Pauli::Z, Pauli::Z, 'd'};
  return {Pauli::X, Pauli::Z, 'a'};
}

// State shared by the reduction loops: the pair being conjugated step by
// step, and the accumulated update gates.  Each step applies g . g^dagger to
// both operators; the synthesized V is the reversed-and-inverted update list,
// so that conjugating the reduced targets by V restores the inputs.
struct Reduction {
  PauliString o1, o2;
  std::vector<CliffordGate> updates;

  void apply(CliffordGate g) {
    o1 = conjugate_gate(g, o1);
    o2 = conjugate_gate(g, o2);
    updates.push_back(g);
  }

  void standardize() {
    for (int q = 0; q < o1.size(); ++q) {
      CanonicalTarget tgt = classify(o1.letter(q), o2.letter(q));
      for (CliffordGateKind kind :
           find_standardization_word(o1.letter(q), o2.letter(q), tgt.t1, tgt.t2)) {
        apply(CliffordGate{kind, q, -1});
      }
    }
  }

  // Buckets recomputed from the current letters.
  PauliPartition partition() const {
    PauliPartition part;
    for (int q = 0; q < o1.size(); ++q) {
      switch (classify(o1.letter(q), o2.letter(q)).bucket) {
        case 'a': part.a.push_back(q); break;
        case 'b': part.b.push_back(q); break;
        case 'c': part.c.push_back(q); break;
        case 'd': part.d.push_back(q); break;
        default: part.e.push_back(q); break;
      }
    }
    return part;
  }

  CliffordCircuit make_v() const {
    CliffordCircuit updates_circuit;
    updates_circuit.n_qubits = o1.size();
    updates_circuit.gates = updates;
    return updates_circuit.inverse();
  }
};

void check_pair_widths(const PauliString& o1, const PauliString& o2) {
  if (o1.size() != o2.size() || o1.size() == 0) {
    throw ContractError("pauli pair must share a positive register size");
  }
}

CliffordGate cnot(int control, int target) {
  return CliffordGate{CliffordGateKind::CNOT, control, target};
}

}  // namespace

StandardForm standard_form(const PauliString& o1, const PauliString& o2) {
  check_pair_widths(o1, o2);
  Reduction red{o1, o2, {}};
  red.standardize();
  StandardForm out;
  out.w = red.make_v();
  out.partition = red.partition();
  return out;
}

SingleQubitReduction lemma1_synthesize(const PauliString& o1, const PauliString& o2) {
  check_pair_widths(o1, o2);
  if (commutes(o1, o2)) {
    throw ContractError("single-qubit reduction requires an anticommuting pair");
  }
  Reduction red{o1, o2, {}};
  red.standardize();

  // Peel off qubits outside the anticommuting core, lowest index first.
  // Single-support qubits in the first operator go first, then the rest; a
  // (Z,Z) qubit turns into a (Z,I) one and is picked up on a later pass.
  for (;;) {
    PauliPartition part = red.partition();
    if (!part.b.empty()) {
      red.apply(CliffordGate{CliffordGateKind::CZ, part.a.front(), part.b.front()});
    } else if (!part.c.empty() || !part.d.empty()) {
      int b = part.c.empty() ? part.d.front()
                             : (part.d.empty() ? part.c.front()
                                               : std::min(part.c.front(), part.d.front()));
      red.apply(cnot(/*control=*/b, /*target=*/part.a.front()));
    } else {
      break;
    }
  }

  // The surviving core has odd size 2k+1; 3k CNOTs funnel it onto its lowest
  // qubit.
  std::vector<int> a = red.partition().a;
  if (a.empty() || a.size() % 2 == 0) {
    throw ContractError("anticommuting core has unexpected size");
  }
  int k = static_cast<int>(a.size() - 1) / 2;
  for (int block = k; block >= 1; --block) {
    red.apply(cnot(a[static_cast<size_t>(2 * block)], a[static_cast<size_t>(2 * block - 1)]));
    red.apply(cnot(a[static_cast<size_t>(2 * block - 1)], a[0]));
    red.apply(cnot(a[0], a[static_cast<size_t>(2 * block)]));
  }
  int q = a[0];

  // Fix residual signs with a trailing single-qubit Pauli on q.
  bool flip1 = red.o1.sign() < 0;
  bool flip2 = red.o2.sign() < 0;
  if (flip1 && flip2) red.apply(CliffordGate{CliffordGateKind::Y, q, -1});
  else if (flip1) red.apply(CliffordGate{CliffordGateKind::Z, q, -1});
  else if (flip2) red.apply(CliffordGate{CliffordGateKind::X, q, -1});

  SingleQubitReduction out;
  out.v = red.make_v();
  out.qubit = q;
  if (conjugate(out.v, PauliString::single(o1.size(), q, Pauli::X)) != o1 ||
      conjugate(out.v, PauliString::single(o1.size(), q, Pauli::Z)) != o2) {
    throw ContractError("single-qubit reduction self-check failed");
  }
  return out;
}

TwoQubitReduction lemma2_synthesize(const PauliString& o1, const PauliString& o2) {
  check_pair_widths(o1, o2);
  if (!commutes(o1, o2)) {
    throw ContractError("two-qubit reduction requires a commuting pair");
  }
  if (o1.is_identity() || o2.is_identity()) {
    throw ContractError("two-qubit reduction requires non-identity operators");
  }
  if (o1.letters() == o2.letters()) {
    throw ContractError("two-qubit reduction requires distinct letter words");
  }
  Reduction red{o1, o2, {}};
  red.standardize();

  // The anticommuting core has even size 2k.  Per block, two CNOTs and a
  // Hadamard turn (X,X)/(Z,Z) on the block pair into single-operator letters
  // (Z,I) on the first qubit and (I,Z) on the second.
  {
    std::vector<int> a = red.partition().a;
    if (a.size() % 2 != 0) throw ContractError("commuting core has odd size");
    int k = static_cast<int>(a.size()) / 2;
    for (int block = k; block >= 1; --block) {
      int lo = a[static_cast<size_t>(2 * block - 2)];
      int hi = a[static_cast<size_t>(2 * block - 1)];
      red.apply(cnot(/*control=*/lo, /*target=*/hi));
      red.apply(cnot(/*control=*/hi, /*target=*/lo));
      red.apply(CliffordGate{CliffordGateKind::H, lo, -1});
    }
  }

  // Drain shared-support qubits, then contract each operator to weight one.
  for (;;) {
    PauliPartition part = red.partition();
    if (!part.d.empty()) {
      int d = part.d.front();
      if (!part.b.empty()) {
        red.apply(cnot(/*control=*/d, /*target=*/part.b.front()));
      } else if (!part.c.empty()) {
        red.apply(cnot(/*control=*/d, /*target=*/part.c.front()));
      } else {
        // Both operators reduced onto the same shared support would mean the
        // letter words were equal, which was rejected above.
        throw ContractError("two-qubit reduction deadlocked on shared support");
      }
    } else if (part.b.size() >= 2) {
      red.apply(cnot(/*control=*/part.b[0], /*target=*/part.b[1]));
    } else if (part.c.size() >= 2) {
      red.apply(cnot(/*control=*/part.c[0], /*target=*/part.c[1]));
    } else {
      break;
    }
  }

  PauliPartition part = red.partition();
  if (part.b.size() != 1 || part.c.size() != 1) {
    throw ContractError("two-qubit reduction did not reach weight one");
  }
  int p = part.b.front();
  int q = part.c.front();
  if (red.o1.sign() < 0) red.apply(CliffordGate{CliffordGateKind::X, p, -1});
  if (red.o2.sign() < 0) red.apply(CliffordGate{CliffordGateKind::X, q, -1});

  TwoQubitReduction out;
  out.v = red.make_v();
  out.qubit_p = p;
  out.qubit_q = q;
  if (conjugate(out.v, PauliString::single(o1.size(), p, Pauli::Z)) != o1 ||
      conjugate(out.v, PauliString::single(o1.size(), q, Pauli::Z)) != o2) {
    throw ContractError("two-qubit reduction self-check failed");
  }
  return out;
}

namespace {

CliffordCircuit sandwich(const CliffordCircuit& v, std::vector<CliffordGate> middle) {
  CliffordCircuit mid;
  mid.n_qubits = v.n_qubits;
  mid.gates = std::move(middle);
  return v.inverse().then(mid).then(v);
}

CliffordCircuit pauli_word_circuit(const PauliString& word) {
  CliffordCircuit c;
  c.n_qubits = word.size();
  for (int q = 0; q < word.size(); ++q) {
    switch (word.letter(q)) {
      case Pauli::I: break;
      case Pauli::X: c.gates.push_back({CliffordGateKind::X, q, -1}); break;
      case Pauli::Y: c.gates.push_back({CliffordGateKind::Y, q, -1}); break;
      case Pauli::Z: c.gates.push_back({CliffordGateKind::Z, q, -1}); break;
    }
  }
  return c;
}

}  // namespace

HeisenbergDecomposition heisenberg_decompose(const PauliString& o1,
                                             const PauliString& o2) {
  check_pair_widths(o1, o2);
  if (o1.is_identity() || o2.is_identity()) {
    throw ContractError("observable decomposition requires non-identity operators");
  }

  HeisenbergDecomposition out;
  int parity1 = o1.y_count() % 2;
  int parity2 = o2.y_count() % 2;
  if (parity1 != parity2) {
    // Complex conjugation gives the two operators opposite signs, so the
    // symmetrized expectation on a real same-circuit ansatz is exactly zero.
    out.vanishes = true;
    return out;
  }
  out.sigma = parity1 ? -1 : +1;
  double sigma = static_cast<double>(out.sigma);

  if (o1.letters() == o2.letters()) {
    // Same letter word: a single Clifford, C1 = C2 = the word itself.
    double a = sigma * o1.sign() * o2.sign();
    WeightedClifford term;
    term.coefficient = a;
    term.circuit = pauli_word_circuit(o1);
    term.pauli_form = {{1.0, o1.unsigned_word()}};
    out.terms = {term, term};
    return out;
  }

  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  if (!commutes(o1, o2)) {
    SingleQubitReduction red = lemma1_synthesize(o1, o2);
    int q = red.qubit;
    WeightedClifford plus;  // (o1 + o2)/sqrt(2) = V H_q V^dagger
    plus.coefficient = sigma;
    plus.circuit = sandwich(red.v, {{CliffordGateKind::H, q, -1}});
    plus.pauli_form = {{inv_sqrt2 * o1.sign(), o1.unsigned_word()},
                      {inv_sqrt2 * o2.sign(), o2.unsigned_word()}};
    WeightedClifford minus;  // (o1 - o2)/sqrt(2) = V X_q H_q X_q V^dagger
    minus.coefficient = -sigma;
    minus.circuit = sandwich(red.v, {{CliffordGateKind::X, q, -1},
                                     {CliffordGateKind::H, q, -1},
                                     {CliffordGateKind::X, q, -1}});
    minus.pauli_form = {{inv_sqrt2 * o1.sign(), o1.unsigned_word()},
                       {-inv_sqrt2 * o2.sign(), o2.unsigned_word()}};
    out.terms = {plus, minus};
    return out;
  }

  // Commuting pair with distinct words.
  TwoQubitReduction red = lemma2_synthesize(o1, o2);
  out.a0 = sigma;
  out.half_anticommutator = multiply_real(o1, o2);
  for (int alpha = 0; alpha <= 1; ++alpha) {
    for (int beta = 0; beta <= 1; ++beta) {
      std::vector<CliffordGate> mid;
      if (alpha) mid.push_back({CliffordGateKind::X, red.qubit_p, -1});
      if (beta) mid.push_back({CliffordGateKind::X, red.qubit_q, -1});
      mid.push_back({CliffordGateKind::CZ, red.qubit_p, red.qubit_q});
      if (alpha) mid.push_back({CliffordGateKind::X, red.qubit_p, -1});
      if (beta) mid.push_back({CliffordGateKind::X, red.qubit_q, -1});

      WeightedClifford term;
      term.coefficient = ((alpha + beta) % 2) ? -sigma : sigma;
      term.circuit = sandwich(red.v, std::move(mid));
      double s1 = alpha ? -1.0 : 1.0;
      double s2 = beta ? -1.0 : 1.0;
      term.pauli_form = {
          {0.5, PauliString::identity(o1.size())},
          {0.5 * s1 * o1.sign(), o1.unsigned_word()},
          {0.5 * s2 * o2.sign(), o2.unsigned_word()},
          {-0.5 * s1 * s2 * out.half_anticommutator.sign(),
           out.half_anticommutator.unsigned_word()}};
      out.terms.push_back(std::move(term));
    }
  }
  return out;
}

}  // namespace forge
