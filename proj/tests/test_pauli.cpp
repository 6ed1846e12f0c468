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

#include <complex>
#include <cstdint>
#include <vector>

#include "doctest.h"
#include "forge/errors.hpp"
#include "forge/pauli.hpp"
#include "forge/rng.hpp"
#include "support/oracle.hpp"

namespace {

using forge::Pauli;
using forge::PauliString;

const std::complex<double> kI{0.0, 1.0};

std::complex<double> i_power(int e) {
  switch (((e % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return kI;
    case 2: return {-1.0, 0.0};
    default: return -kI;
  }
}

}  // namespace

TEST_CASE("pauli parse and print round-trip") {
  const PauliString w = PauliString::parse("XXIZY");
  CHECK(w.size() == 5);
  CHECK(w.sign() == +1);
  CHECK(w.str() == "+XXIZY");
  CHECK(w.letter(0) == Pauli::X);
  CHECK(w.letter(2) == Pauli::I);
  CHECK(w.letter(4) == Pauli::Y);

  const PauliString neg = PauliString::parse("-IZ");
  CHECK(neg.sign() == -1);
  CHECK(neg.str() == "-IZ");
  CHECK(PauliString::parse(neg.str()) == neg);

  CHECK(PauliString::parse("+Z").str() == "+Z");
  CHECK_THROWS_AS(PauliString::parse(""), forge::InputError);
  CHECK_THROWS_AS(PauliString::parse("-"), forge::InputError);
  CHECK_THROWS_AS(PauliString::parse("XQZ"), forge::InputError);
}

TEST_CASE("pauli constructors and accessors") {
  const PauliString id = PauliString::identity(3);
  CHECK(id.str() == "+III");
  CHECK(id.is_identity());
  CHECK(id.weight() == 0);

  const PauliString single = PauliString::single(4, 2, Pauli::Y);
  CHECK(single.str() == "+IIYI");
  CHECK(single.weight() == 1);
  CHECK(single.y_count() == 1);
  CHECK(single.support() == std::vector<int>{2});

  PauliString w = PauliString::parse("-XYIZY");
  CHECK(w.weight() == 4);
  CHECK(w.y_count() == 2);
  CHECK(w.support() == std::vector<int>{0, 1, 3, 4});
  CHECK(w.unsigned_word().sign() == +1);
  CHECK(w.unsigned_word().letters() == w.letters());
  CHECK(w.negated().sign() == +1);
  w.set_letter(2, Pauli::Z);
  CHECK(w.str() == "-XYZZY");
  CHECK_FALSE(w.is_identity());
  CHECK(PauliString::identity(2).negated().str() == "-II");
}

TEST_CASE("parity eigenvalue counts set bits on the support only") {
  // Word over qubits {0, 2}; qubit 1 never matters.
  const PauliString w = PauliString::parse("ZIZ");
  CHECK(w.parity_eigenvalue(0b000) == +1);
  CHECK(w.parity_eigenvalue(0b101) == +1);
  CHECK(w.parity_eigenvalue(0b001) == -1);
  CHECK(w.parity_eigenvalue(0b100) == -1);
  CHECK(w.parity_eigenvalue(0b010) == +1);
  CHECK(w.parity_eigenvalue(0b111) == +1);

  const PauliString neg = PauliString::parse("-ZIZ");
  CHECK(neg.parity_eigenvalue(0b000) == -1);
  CHECK(neg.parity_eigenvalue(0b001) == +1);

  CHECK(PauliString::identity(2).parity_eigenvalue(0b11) == +1);
}

TEST_CASE("commutation verdicts on small words") {
  const auto w = [](const char* s) { return PauliString::parse(s); };
  CHECK_FALSE(forge::commutes(w("X"), w("Z")));
  CHECK_FALSE(forge::commutes(w("X"), w("Y")));
  CHECK(forge::commutes(w("X"), w("X")));
  CHECK(forge::commutes(w("X"), w("I")));
  // Two anticommuting positions cancel.
  CHECK(forge::commutes(w("XX"), w("ZZ")));
  CHECK_FALSE(forge::commutes(w("XX"), w("ZI")));
  CHECK(forge::commutes(w("XI"), w("IZ")));
  // Signs never affect commutation.
  CHECK(forge::commutes(w("-XX"), w("ZZ")));
}

TEST_CASE("multiply matches frozen single-qubit table") {
  const auto w = [](const char* s) { return PauliString::parse(s); };

  auto prod = forge::multiply(w("X"), w("Y"));
  CHECK(prod.i_exponent == 1);  // XY = iZ
  CHECK(prod.word == w("Z"));

  prod = forge::multiply(w("Y"), w("X"));
  CHECK(prod.i_exponent == 3);  // YX = -iZ
  CHECK(prod.word == w("Z"));

  prod = forge::multiply(w("X"), w("X"));
  CHECK(prod.i_exponent == 0);
  CHECK(prod.word == w("I"));

  prod = forge::multiply(w("Z"), w("X"));
  CHECK(prod.i_exponent == 1);  // ZX = iY
  CHECK(prod.word == w("Y"));

  // Input signs fold into the exponent as i^2.
  prod = forge::multiply(w("-X"), w("Y"));
  CHECK(prod.i_exponent == 3);
  CHECK(prod.word == w("Z"));
  CHECK(prod.word.sign() == +1);
}

TEST_CASE("multiply agrees with the dense matrix product") {
  forge::RandomSource rng(20260101);
  for (int trial = 0; trial < 120; ++trial) {
    const int n = 1 + static_cast<int>(rng.uniform_int(4));
    const PauliString a = oracle::random_pauli(rng, n);
    const PauliString b = oracle::random_pauli(rng, n);
    const forge::PauliProduct prod = forge::multiply(a, b);
    CHECK(prod.word.sign() == +1);

    const oracle::Matrix lhs = oracle::pauli_matrix(a) * oracle::pauli_matrix(b);
    const oracle::Matrix rhs =
        i_power(prod.i_exponent) * oracle::pauli_matrix(prod.word);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);

    // The commutation verdict matches the dense commutator.
    const oracle::Matrix comm = oracle::pauli_matrix(a) * oracle::pauli_matrix(b) -
                                oracle::pauli_matrix(b) * oracle::pauli_matrix(a);
    const bool commutes_dense = comm.cwiseAbs().maxCoeff() < 1e-12;
    CHECK(forge::commutes(a, b) == commutes_dense);
  }
}

TEST_CASE("multiply_real folds phase into the sign or refuses") {
  const auto w = [](const char* s) { return PauliString::parse(s); };
  CHECK(forge::multiply_real(w("ZZ"), w("ZI")) == w("IZ"));
  CHECK(forge::multiply_real(w("-ZZ"), w("ZI")) == w("-IZ"));
  // (X.Y)(Y.X): phases i and -i cancel, so the product is real.
  CHECK(forge::multiply_real(w("XY"), w("YX")) == w("ZZ"));
  // Single anticommuting pair leaves a factor of i.
  CHECK_THROWS_AS(forge::multiply_real(w("X"), w("Y")), forge::ContractError);
  CHECK_THROWS_AS(forge::multiply_real(w("XI"), w("YI")), forge::ContractError);
}
