// Copyright 2026 The forgesim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <set>
#include <vector>

#include "doctest.h"
#include "forge/errors.hpp"
#include "forge/pauli.hpp"
#include "forge/rng.hpp"
#include "forge/synthesis.hpp"
#include "support/oracle.hpp"

namespace {

using forge::Pauli;
using forge::PauliString;

// Dense matrix of conj(C) (x) C on a doubled register, with conj(C) acting on
// the first (low-bit) half.
oracle::Matrix doubled(const oracle::Matrix& c) {
  return oracle::kron(c, c.conjugate());
}

oracle::Matrix pauli_form_matrix(const forge::WeightedClifford& term) {
  oracle::Matrix m;
  bool first = true;
  for (const auto& [weight, word] : term.pauli_form) {
    const oracle::Matrix piece = weight * oracle::pauli_matrix(word);
    m = first ? piece : oracle::Matrix(m + piece);
    first = false;
  }
  REQUIRE_FALSE(first);
  return m;
}

// Verifies the full decomposition contract for one pair and returns the
// maximum dense reconstruction error.
double check_decomposition(const PauliString& o1, const PauliString& o2) {
  const forge::HeisenbergDecomposition dec = forge::heisenberg_decompose(o1, o2);
  if ((o1.y_count() + o2.y_count()) % 2 != 0) {
    CHECK(dec.vanishes);
    return 0.0;
  }
  CHECK_FALSE(dec.vanishes);
  CHECK(dec.sigma == ((o1.y_count() % 2 == 0) ? +1 : -1));

  const oracle::Matrix m1 = oracle::pauli_matrix(o1);
  const oracle::Matrix m2 = oracle::pauli_matrix(o2);
  const oracle::Matrix target = oracle::kron(m2, m1) + oracle::kron(m1, m2);

  const auto dim = m1.rows();
  const oracle::Matrix id = oracle::Matrix::Identity(dim, dim);
  oracle::Matrix rebuilt = oracle::Matrix::Zero(dim * dim, dim * dim);
  if (dec.a0 != 0.0) {
    const oracle::Matrix k = oracle::pauli_matrix(dec.half_anticommutator);
    rebuilt += dec.a0 * (oracle::kron(id, k) + oracle::kron(k, id));
  }
  double max_err = 0.0;
  for (const auto& term : dec.terms) {
    const oracle::Matrix c = pauli_form_matrix(term);
    rebuilt += term.coefficient * doubled(c);
    // The circuit realizes the same operator up to a global phase, which
    // cancels in the doubled form.
    const oracle::Matrix u = oracle::clifford_unitary(term.circuit);
    max_err = std::max(max_err,
                       (doubled(u) - doubled(c)).cwiseAbs().maxCoeff());
  }
  max_err = std::max(max_err, (rebuilt - target).cwiseAbs().maxCoeff());
  return max_err;
}

std::vector<PauliString> all_words(int n) {
  std::vector<PauliString> words;
  const int total = 1 << (2 * n);
  for (int code = 0; code < total; ++code) {
    std::vector<Pauli> letters(static_cast<size_t>(n));
    int c = code;
    for (int q = 0; q < n; ++q) {
      letters[static_cast<size_t>(q)] = static_cast<Pauli>(c & 3);
      c >>= 2;
    }
    words.emplace_back(std::move(letters));
  }
  return words;
}

}  // namespace

TEST_CASE("standard_form classifies every qubit with single-qubit gates") {
  forge::RandomSource rng(20260110);
  for (int trial = 0; trial < 120; ++trial) {
    const int n = 1 + static_cast<int>(rng.uniform_int(5));
    const PauliString o1 = oracle::random_pauli(rng, n);
    const PauliString o2 = oracle::random_pauli(rng, n);
    const forge::StandardForm sf = forge::standard_form(o1, o2);
    CHECK(sf.w.two_qubit_count() == 0);

    const PauliString p1 = forge::conjugate_adjoint(sf.w, o1);
    const PauliString p2 = forge::conjugate_adjoint(sf.w, o2);

    std::set<int> seen;
    const auto classify = [&](const std::vector<int>& qubits, Pauli want1,
                              Pauli want2) {
      CHECK(std::is_sorted(qubits.begin(), qubits.end()));
      for (int q : qubits) {
        CHECK(seen.insert(q).second);
        CHECK(p1.letter(q) == want1);
        CHECK(p2.letter(q) == want2);
      }
    };
    classify(sf.partition.a, Pauli::X, Pauli::Z);
    classify(sf.partition.b, Pauli::Z, Pauli::I);
    classify(sf.partition.c, Pauli::I, Pauli::Z);
    classify(sf.partition.d, Pauli::Z, Pauli::Z);
    classify(sf.partition.e, Pauli::I, Pauli::I);
    CHECK(static_cast<int>(seen.size()) == n);
  }
}

TEST_CASE("anticommuting pairs reduce to a single qubit") {
  forge::RandomSource rng(20260111);
  int tested = 0;
  while (tested < 80) {
    const int n = 1 + static_cast<int>(rng.uniform_int(5));
    const PauliString o1 = oracle::random_pauli(rng, n, true);
    const PauliString o2 = oracle::random_pauli(rng, n, true);
    if (forge::commutes(o1, o2)) continue;
    ++tested;

    const forge::SingleQubitReduction red = forge::lemma1_synthesize(o1, o2);
    CHECK(forge::conjugate(red.v,
                           PauliString::single(n, red.qubit, Pauli::X)) == o1);
    CHECK(forge::conjugate(red.v,
                           PauliString::single(n, red.qubit, Pauli::Z)) == o2);
    CHECK(red.v.two_qubit_count() <= o1.weight() + o2.weight() - 2);
  }
  CHECK_THROWS_AS(forge::lemma1_synthesize(PauliString::parse("XX"),
                                           PauliString::parse("ZZ")),
                  forge::ContractError);
}

TEST_CASE("commuting distinct pairs reduce to two qubits") {
  forge::RandomSource rng(20260112);
  int tested = 0;
  while (tested < 80) {
    const int n = 2 + static_cast<int>(rng.uniform_int(4));
    const PauliString o1 = oracle::random_pauli(rng, n, true);
    const PauliString o2 = oracle::random_pauli(rng, n, true);
    if (!forge::commutes(o1, o2)) continue;
    if (o1.is_identity() || o2.is_identity()) continue;
    if (o1.unsigned_word() == o2.unsigned_word()) continue;
    ++tested;

    const forge::TwoQubitReduction red = forge::lemma2_synthesize(o1, o2);
    CHECK(red.qubit_p != red.qubit_q);
    CHECK(forge::conjugate(red.v,
                           PauliString::single(n, red.qubit_p, Pauli::Z)) == o1);
    CHECK(forge::conjugate(red.v,
                           PauliString::single(n, red.qubit_q, Pauli::Z)) == o2);
    CHECK(red.v.two_qubit_count() <= o1.weight() + o2.weight() - 2);
  }
  CHECK_THROWS_AS(forge::lemma2_synthesize(PauliString::parse("XY"),
                                           PauliString::parse("YY")),
                  forge::ContractError);
  CHECK_THROWS_AS(forge::lemma2_synthesize(PauliString::parse("II"),
                                           PauliString::parse("ZZ")),
                  forge::ContractError);
  CHECK_THROWS_AS(forge::lemma2_synthesize(PauliString::parse("ZZ"),
                                           PauliString::parse("ZZ")),
                  forge::ContractError);
}

TEST_CASE("observable decomposition reconstructs the symmetrized pair") {
  SUBCASE("exhaustive single-qubit pairs") {
    const auto words = all_words(1);
    for (const auto& o1 : words) {
      for (const auto& o2 : words) {
        if (o1.is_identity() || o2.is_identity()) continue;
        CHECK(check_decomposition(o1, o2) < 1e-10);
      }
    }
  }
  SUBCASE("random two-qubit pairs with signs") {
    forge::RandomSource rng(20260113);
    for (int trial = 0; trial < 60; ++trial) {
      const PauliString o1 = oracle::random_pauli(rng, 2, true);
      const PauliString o2 = oracle::random_pauli(rng, 2, true);
      if (o1.is_identity() || o2.is_identity()) continue;
      CHECK(check_decomposition(o1, o2) < 1e-10);
    }
  }
  SUBCASE("random three-qubit pairs") {
    forge::RandomSource rng(20260114);
    for (int trial = 0; trial < 25; ++trial) {
      const PauliString o1 = oracle::random_pauli(rng, 3, true);
      const PauliString o2 = oracle::random_pauli(rng, 3, true);
      if (o1.is_identity() || o2.is_identity()) continue;
      CHECK(check_decomposition(o1, o2) < 1e-10);
    }
  }
  SUBCASE("identity operands are rejected") {
    CHECK_THROWS_AS(forge::heisenberg_decompose(PauliString::parse("II"),
                                                PauliString::parse("XZ")),
                    forge::ContractError);
  }
  SUBCASE("opposite y parity vanishes") {
    const auto dec = forge::heisenberg_decompose(PauliString::parse("Y"),
                                                 PauliString::parse("X"));
    CHECK(dec.vanishes);
    CHECK(dec.terms.empty());
  }
}
