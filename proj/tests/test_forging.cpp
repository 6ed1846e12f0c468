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

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "doctest.h"
#include "forge/ansatz.hpp"
#include "forge/errors.hpp"
#include "forge/forging.hpp"
#include "forge/hamiltonian.hpp"
#include "forge/pauli.hpp"
#include "forge/rng.hpp"
#include "forge/statevector.hpp"
#include "support/oracle.hpp"

namespace {

using forge::CrossTermPath;
using forge::ForgedTerm;
using forge::PauliString;
using forge::PrepKind;
using forge::SchmidtAnsatz;
using forge::Statevector;

SchmidtAnsatz bell_ansatz() {
  SchmidtAnsatz ansatz;
  ansatz.n = 1;
  ansatz.bitstrings = {0, 1};
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  ansatz.lambdas = {inv_sqrt2, inv_sqrt2};
  ansatz.u.n_qubits = 1;
  return ansatz;
}

// The 2n-qubit state the ansatz describes, assembled with dense linear
// algebra only (first register in the low bits).
oracle::Vector forged_state(const SchmidtAnsatz& ansatz) {
  const int n = ansatz.n;
  const oracle::Matrix u = oracle::circuit_unitary(ansatz.u);
  const oracle::Matrix v = oracle::circuit_unitary(ansatz.v_circuit());
  const Eigen::Index dim = Eigen::Index{1} << n;
  oracle::Vector psi = oracle::Vector::Zero(dim * dim);
  for (int i = 0; i < ansatz.k(); ++i) {
    oracle::Vector basis = oracle::Vector::Zero(dim);
    basis(static_cast<Eigen::Index>(ansatz.bitstrings[static_cast<size_t>(i)])) =
        1.0;
    const oracle::Vector side1 = u * basis;
    const oracle::Vector side2 = v * basis;
    psi += ansatz.lambdas[static_cast<size_t>(i)] *
           oracle::kron(side2, side1).col(0);
  }
  return psi;
}

PauliString concat(const PauliString& o1, const PauliString& o2) {
  std::vector<forge::Pauli> letters = o1.letters();
  letters.insert(letters.end(), o2.letters().begin(), o2.letters().end());
  return PauliString(std::move(letters), o1.sign() * o2.sign());
}

double direct_expectation(const SchmidtAnsatz& ansatz, const PauliString& o1,
                          const PauliString& o2) {
  return oracle::expectation(forged_state(ansatz),
                             oracle::pauli_matrix(concat(o1, o2)));
}

PauliString random_even_y_word(forge::RandomSource& rng, int n) {
  for (;;) {
    PauliString word = oracle::random_pauli(rng, n, true);
    if (word.y_count() % 2 == 0) return word;
  }
}

}  // namespace

TEST_CASE("forged term enumeration for the Bell ansatz") {
  const auto terms = forge::enumerate_forged_terms(bell_ansatz());
  REQUIRE(terms.size() == 6);
  // Diagonals first, then the four phased superpositions of the pair (1, 0).
  CHECK(terms[0].kind == PrepKind::Bitstring);
  CHECK(terms[0].n == 0);
  CHECK(terms[0].mu == doctest::Approx(0.5));
  CHECK(terms[1].kind == PrepKind::Bitstring);
  CHECK(terms[1].n == 1);
  CHECK(terms[1].mu == doctest::Approx(0.5));
  for (int p = 0; p < 4; ++p) {
    const ForgedTerm& t = terms[static_cast<size_t>(2 + p)];
    CHECK(t.kind == PrepKind::Superposition);
    CHECK(t.n == 1);
    CHECK(t.m == 0);
    CHECK(t.p == p);
    CHECK(t.mu == doctest::Approx(p % 2 == 0 ? 0.5 : -0.5));
  }
  double one_norm = 0.0;
  for (const auto& t : terms) one_norm += std::abs(t.mu);
  CHECK(one_norm == doctest::Approx(3.0));
}

TEST_CASE("zero coefficients drop their terms") {
  SchmidtAnsatz ansatz = bell_ansatz();
  ansatz.lambdas = {1.0, 0.0};
  const auto terms = forge::enumerate_forged_terms(ansatz);
  REQUIRE(terms.size() == 1);
  CHECK(terms[0].kind == PrepKind::Bitstring);
  CHECK(terms[0].mu == doctest::Approx(1.0));
  CHECK(forge::enumerate_product_terms(ansatz).size() == 1);
}

TEST_CASE("product term enumeration weights by hamming distance") {
  SchmidtAnsatz ansatz;
  ansatz.n = 2;
  ansatz.bitstrings = {0b00, 0b11};
  ansatz.lambdas = {0.8, 0.6};
  ansatz.u.n_qubits = 2;
  const auto terms = forge::enumerate_product_terms(ansatz);
  // 2 diagonals + 4d = 8 product preparations at distance d = 2.
  REQUIRE(terms.size() == 10);
  for (size_t i = 2; i < terms.size(); ++i) {
    const ForgedTerm& t = terms[i];
    CHECK(t.kind == PrepKind::Product);
    const double expected = 0.8 * 0.6 * 16.0 / 8.0;
    CHECK(std::abs(t.mu) == doctest::Approx(expected));
    CHECK(t.mu == doctest::Approx(t.p % 2 == 0 ? expected : -expected));
  }
}

TEST_CASE("superposition states and their preparation circuits") {
  const Statevector s = forge::superposition_state(2, 0b01, 0b10, 1);
  CHECK(std::abs(s.amplitude(0b01) - std::complex<double>(1 / std::sqrt(2.0))) <
        1e-15);
  CHECK(std::abs(s.amplitude(0b10) -
                 std::complex<double>(0.0, 1 / std::sqrt(2.0))) < 1e-15);
  CHECK(std::abs(s.amplitude(0b00)) == 0.0);
  CHECK(std::abs(s.amplitude(0b11)) == 0.0);

  CHECK_THROWS_AS(forge::superposition_state(2, 1, 1, 0), forge::InputError);
  CHECK_THROWS_AS(forge::superposition_state(2, 0, 1, 4), forge::InputError);

  // The prep circuit reproduces the state up to a global phase, verified
  // against the dense unitary of the circuit.
  forge::RandomSource rng(20260130);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 1 + static_cast<int>(rng.uniform_int(4));
    const uint64_t dim = uint64_t{1} << n;
    const uint64_t x = rng.uniform_int(static_cast<int>(dim));
    uint64_t y = rng.uniform_int(static_cast<int>(dim));
    if (x == y) continue;
    const int p = rng.uniform_int(4);

    const oracle::Vector want =
        oracle::to_eigen(forge::superposition_state(n, x, y, p));
    const forge::Circuit prep = forge::superposition_prep_circuit(n, x, y, p);
    oracle::Vector zero = oracle::Vector::Zero(static_cast<Eigen::Index>(dim));
    zero(0) = 1.0;
    const oracle::Vector got = oracle::circuit_unitary(prep) * zero;
    const std::complex<double> overlap = want.dot(got);
    CHECK(std::abs(std::abs(overlap) - 1.0) < 1e-12);
  }
}

TEST_CASE("product preparations factorize qubit by qubit") {
  const auto factors = forge::product_prep_factors(2, 0b00, 0b11, 1);
  REQUIRE(factors.size() == 2);
  const std::complex<double> phase = std::polar(1.0, M_PI / 4.0);
  for (const auto& f : factors) {
    CHECK(std::abs(f.amp0 - std::complex<double>(1 / std::sqrt(2.0))) < 1e-15);
    CHECK(std::abs(f.amp1 - phase / std::sqrt(2.0)) < 1e-15);
  }

  // product_state equals the dense tensor product of its factors.
  forge::RandomSource rng(20260131);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 1 + static_cast<int>(rng.uniform_int(3));
    const uint64_t dim = uint64_t{1} << n;
    const uint64_t x = rng.uniform_int(static_cast<int>(dim));
    uint64_t y = rng.uniform_int(static_cast<int>(dim));
    if (x == y) continue;
    const int d = std::popcount(x ^ y);
    const int p = rng.uniform_int(4 * d);

    const auto parts = forge::product_prep_factors(n, x, y, p);
    oracle::Vector tensor = oracle::Vector::Ones(1);
    for (int q = n - 1; q >= 0; --q) {
      oracle::Vector f(2);
      f(0) = parts[static_cast<size_t>(q)].amp0;
      f(1) = parts[static_cast<size_t>(q)].amp1;
      tensor = oracle::kron(tensor, f).col(0);
    }
    const oracle::Vector got =
        oracle::to_eigen(forge::product_state(n, x, y, p));
    CHECK((got - tensor).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(std::abs(got.norm() - 1.0) < 1e-12);
  }
  CHECK_THROWS_AS(forge::product_prep_factors(2, 0b00, 0b11, 8),
                  forge::InputError);
}

TEST_CASE("prep_state dispatches on the term kind") {
  SchmidtAnsatz ansatz;
  ansatz.n = 2;
  ansatz.bitstrings = {0b01, 0b10};
  ansatz.lambdas = {0.6, -0.8};
  ansatz.u.n_qubits = 2;

  const Statevector diag =
      forge::prep_state(ansatz, {1.0, PrepKind::Bitstring, 1, 1, 0});
  CHECK(std::abs(diag.amplitude(0b10) - std::complex<double>(1.0)) < 1e-15);

  const Statevector sup =
      forge::prep_state(ansatz, {1.0, PrepKind::Superposition, 1, 0, 2});
  const Statevector sup_direct = forge::superposition_state(2, 0b10, 0b01, 2);
  for (uint64_t i = 0; i < 4; ++i) {
    CHECK(std::abs(sup.amplitude(i) - sup_direct.amplitude(i)) == 0.0);
  }

  const Statevector prod =
      forge::prep_state(ansatz, {1.0, PrepKind::Product, 0, 1, 3});
  const Statevector prod_direct = forge::product_state(2, 0b01, 0b10, 3);
  for (uint64_t i = 0; i < 4; ++i) {
    CHECK(std::abs(prod.amplitude(i) - prod_direct.amplitude(i)) == 0.0);
  }

  CHECK_THROWS_AS(forge::prep_state(ansatz, {1.0, PrepKind::Bitstring, 2, 2, 0}),
                  forge::InputError);
}

TEST_CASE("forged expectation matches the dense oracle") {
  forge::RandomSource rng(20260132);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + static_cast<int>(rng.uniform_int(3));
    const int max_k = 1 << n;
    const int k =
        1 + static_cast<int>(rng.uniform_int(std::min(max_k, 4)));
    const bool v_same = rng.uniform() < 0.5;
    const bool real_circuits = rng.uniform() < 0.5;
    const SchmidtAnsatz ansatz =
        oracle::random_ansatz(rng, n, k, v_same, real_circuits);
    const PauliString o1 = oracle::random_pauli(rng, n, true);
    const PauliString o2 = oracle::random_pauli(rng, n, true);

    const double direct = direct_expectation(ansatz, o1, o2);
    const double forged =
        forge::forged_expectation_exact(ansatz, o1, o2, CrossTermPath::Auto);
    CHECK(std::abs(forged - direct) < 1e-10);
    const double four = forge::forged_expectation_exact(
        ansatz, o1, o2, CrossTermPath::FourPhase);
    CHECK(std::abs(four - direct) < 1e-10);
  }
}

TEST_CASE("identity observables shortcut to the signed norm") {
  const SchmidtAnsatz ansatz = bell_ansatz();
  forge::ForgedEvaluator eval(ansatz);
  CHECK(eval.expectation(PauliString::identity(1), PauliString::identity(1)) ==
        1.0);
  CHECK(eval.expectation(PauliString::parse("-I"), PauliString::identity(1)) ==
        -1.0);
  // The pure-identity case needs no state preparation at all.
  CHECK(eval.preparations() == 0);

  // Single-sided identity keeps only diagonal terms; cross terms cancel.
  const double value =
      eval.expectation(PauliString::identity(1), PauliString::parse("Z"));
  // <I (x) Z> on the Bell state is 0.
  CHECK(std::abs(value) < 1e-12);
  const double direct = direct_expectation(ansatz, PauliString::identity(1),
                                           PauliString::parse("Z"));
  CHECK(std::abs(value - direct) < 1e-12);
}

TEST_CASE("even-phase route is exact for real circuits and even-Y words") {
  forge::RandomSource rng(20260133);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 1 + static_cast<int>(rng.uniform_int(3));
    const int k = 2 + static_cast<int>(rng.uniform_int(2));
    if (k > (1 << n)) continue;
    const SchmidtAnsatz ansatz = oracle::random_ansatz(rng, n, k, true, true);
    const PauliString o1 = random_even_y_word(rng, n);
    const PauliString o2 = random_even_y_word(rng, n);

    const double direct = direct_expectation(ansatz, o1, o2);
    const double even = forge::forged_expectation_exact(
        ansatz, o1, o2, CrossTermPath::EvenPhase);
    CHECK(std::abs(even - direct) < 1e-10);
  }
}

TEST_CASE("path resolution and preparation counts") {
  forge::RandomSource rng(20260134);
  const SchmidtAnsatz ansatz = oracle::random_ansatz(rng, 2, 2, true, true);
  const PauliString o1 = PauliString::parse("XX");
  const PauliString o2 = PauliString::parse("ZZ");

  forge::ForgedEvaluator even(ansatz);
  CHECK(even.even_phase_exact(o1, o2));
  CHECK_FALSE(even.even_phase_exact(PauliString::parse("YX"), o2));
  even.expectation(o1, o2, CrossTermPath::Auto);
  // 2 diagonal preparations + 2 superpositions (p = 0, 2).
  CHECK(even.preparations() == 4);
  CHECK(even.diagonal_prepared(0));
  CHECK(even.diagonal_prepared(1));

  forge::ForgedEvaluator four(ansatz);
  four.expectation(o1, o2, CrossTermPath::FourPhase);
  CHECK(four.preparations() == 6);

  // A complex circuit forces the four-phase route under Auto.
  SchmidtAnsatz complex_ansatz = ansatz;
  complex_ansatz.u.gates.push_back(forge::Gate::one(forge::GateKind::S, 0));
  forge::ForgedEvaluator complex_eval(complex_ansatz);
  CHECK_FALSE(complex_eval.even_phase_exact(o1, o2));
  complex_eval.expectation(o1, o2, CrossTermPath::Auto);
  CHECK(complex_eval.preparations() == 6);

  // Distinct U and V double every preparation.
  SchmidtAnsatz split_ansatz = ansatz;
  split_ansatz.v = split_ansatz.u;
  forge::ForgedEvaluator split_eval(split_ansatz);
  split_eval.expectation(o1, o2, CrossTermPath::FourPhase);
  CHECK(split_eval.preparations() == 12);
}

TEST_CASE("manual assembly from pieces reproduces expectation") {
  forge::RandomSource rng(20260135);
  const SchmidtAnsatz ansatz = oracle::random_ansatz(rng, 2, 3, false, false);
  const PauliString o1 = oracle::random_pauli(rng, 2, true);
  const PauliString o2 = oracle::random_pauli(rng, 2, true);

  forge::ForgedEvaluator eval(ansatz);
  double acc = 0.0;
  for (int i = 0; i < ansatz.k(); ++i) {
    acc += ansatz.lambdas[static_cast<size_t>(i)] *
           ansatz.lambdas[static_cast<size_t>(i)] *
           eval.diagonal_piece(i, o1, o2);
  }
  if (!o1.is_identity() && !o2.is_identity()) {
    for (int hi = 1; hi < ansatz.k(); ++hi) {
      for (int lo = 0; lo < hi; ++lo) {
        acc += ansatz.lambdas[static_cast<size_t>(hi)] *
               ansatz.lambdas[static_cast<size_t>(lo)] *
               eval.pair_piece(hi, lo, o1, o2, CrossTermPath::FourPhase);
      }
    }
  }
  CHECK(acc == doctest::Approx(eval.expectation(o1, o2)).epsilon(1e-10));
}

TEST_CASE("product expansion matches the dense oracle") {
  forge::RandomSource rng(20260136);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 1 + static_cast<int>(rng.uniform_int(3));
    const int k = 1 + static_cast<int>(rng.uniform_int(std::min(1 << n, 3)));
    const SchmidtAnsatz ansatz = oracle::random_ansatz(
        rng, n, k, rng.uniform() < 0.5, rng.uniform() < 0.5);
    const PauliString o1 = oracle::random_pauli(rng, n, true);
    const PauliString o2 = oracle::random_pauli(rng, n, true);

    const auto result = forge::forged_expectation_product_exact(ansatz, o1, o2);
    CHECK(std::abs(result.value - direct_expectation(ansatz, o1, o2)) < 1e-10);

    double amplification = 1.0;
    for (int a = 0; a + 1 < ansatz.k(); ++a) {
      for (int b = a + 1; b < ansatz.k(); ++b) {
        const int d = std::popcount(ansatz.bitstrings[static_cast<size_t>(a)] ^
                                    ansatz.bitstrings[static_cast<size_t>(b)]);
        amplification += std::abs(ansatz.lambdas[static_cast<size_t>(a)] *
                                  ansatz.lambdas[static_cast<size_t>(b)]) *
                         std::pow(4.0, d);
      }
    }
    CHECK(result.amplification == doctest::Approx(amplification).epsilon(1e-12));
  }
}

TEST_CASE("forged energy sums weighted expectations") {
  const SchmidtAnsatz ansatz = bell_ansatz();
  const forge::Hamiltonian h =
      forge::Hamiltonian::parse("qubits 2 partition 1\n1 XX\n1 ZZ\n-1 YY\n");
  CHECK(forge::forged_energy_exact(ansatz, h) == doctest::Approx(3.0));

  // Dense cross-check on a random instance.
  forge::RandomSource rng(20260137);
  const SchmidtAnsatz random = oracle::random_ansatz(rng, 2, 3, false, false);
  const forge::Hamiltonian h2 = forge::Hamiltonian::parse(
      "qubits 4 partition 2\n0.5 XYZX\n-1.25 ZZII\n0.75 IXIX\n2 IIII\n");
  const oracle::Vector psi = forged_state(random);
  const double direct =
      oracle::expectation(psi, oracle::hamiltonian_matrix(h2));
  CHECK(forge::forged_energy_exact(random, h2) ==
        doctest::Approx(direct).epsilon(1e-10));

  const forge::Hamiltonian mismatched =
      forge::Hamiltonian::parse("qubits 4 partition 1\n1 ZZZZ\n");
  CHECK_THROWS_AS(forge::forged_energy_exact(random, mismatched),
                  forge::InputError);
}

TEST_CASE("sampling budget for the Bell ansatz is frozen") {
  const auto budget = forge::sampling_budget(bell_ansatz(), 0.1);
  CHECK(budget.one_norm == doctest::Approx(3.0));
  CHECK(budget.one_norm_closed_form == doctest::Approx(9.0));
  CHECK(budget.epsilon == 0.1);
  CHECK(budget.experiments == 180000);
  REQUIRE(budget.pi.size() == 6);
  double total = 0.0;
  for (double pi : budget.pi) {
    CHECK(pi > 0.0);
    total += pi;
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(budget.pi[0] == doctest::Approx(0.5 / 3.0));
  CHECK_THROWS_AS(forge::sampling_budget(bell_ansatz(), 0.0),
                  forge::InputError);
}

TEST_CASE("sampled estimates are deterministic and worker-invariant") {
  const SchmidtAnsatz ansatz = bell_ansatz();
  const PauliString xx = PauliString::parse("X");

  const auto a = forge::estimate_sampled(ansatz, xx, xx, 4000, 97, 1);
  const auto b = forge::estimate_sampled(ansatz, xx, xx, 4000, 97, 1);
  CHECK(a.value == b.value);
  CHECK(a.std_error == b.std_error);
  CHECK(a.pairs == 4000);

  // Worker count never changes the result, only the wall time.
  const auto c = forge::estimate_sampled(ansatz, xx, xx, 4000, 97, 4);
  CHECK(c.value == a.value);
  CHECK(c.std_error == a.std_error);

  const auto d = forge::estimate_sampled(ansatz, xx, xx, 4000, 98, 1);
  CHECK(d.value != a.value);

  CHECK_THROWS_AS(forge::estimate_sampled(ansatz, xx, xx, 0, 1, 1),
                  forge::InputError);
}

TEST_CASE("sampled estimates converge to the exact value") {
  const SchmidtAnsatz ansatz = bell_ansatz();
  const PauliString x = PauliString::parse("X");
  const PauliString z = PauliString::parse("Z");

  // <X (x) X> = 1 on the Bell pair.
  const auto xx = forge::estimate_sampled(ansatz, x, x, 20000, 11, 2);
  CHECK(std::abs(xx.value - 1.0) < 0.1);
  CHECK(xx.std_error > 0.0);
  CHECK(std::abs(xx.value - 1.0) < 6.0 * xx.std_error + 1e-9);

  // <Z (x) Z> = 1 as well.
  const auto zz = forge::estimate_sampled(ansatz, z, z, 20000, 12, 2);
  CHECK(std::abs(zz.value - 1.0) < 0.1);

  // A richer ansatz with distinct circuits.
  forge::RandomSource rng(20260138);
  const SchmidtAnsatz random = oracle::random_ansatz(rng, 2, 3, false, true);
  const PauliString o1 = PauliString::parse("XZ");
  const PauliString o2 = PauliString::parse("ZX");
  const double exact = forge::forged_expectation_exact(random, o1, o2);
  const auto est = forge::estimate_sampled(random, o1, o2, 60000, 13, 3);
  CHECK(std::abs(est.value - exact) < 6.0 * est.std_error + 1e-9);
}

TEST_CASE("schmidt spectrum recovers the coefficient magnitudes") {
  // Bell pair: two equal coefficients.
  const auto bell_spectrum = forge::schmidt_spectrum(forge::apply_circuit(
      Statevector(2), forge::Circuit::parse("H 1\nCNOT 1 2\n", 2)));
  REQUIRE(bell_spectrum.size() == 2);
  CHECK(bell_spectrum[0] == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(bell_spectrum[1] == doctest::Approx(1.0 / std::sqrt(2.0)));

  // Product state: a single unit coefficient.
  const auto product_spectrum =
      forge::schmidt_spectrum(Statevector::basis_state(4, 0b0110));
  CHECK(product_spectrum[0] == doctest::Approx(1.0));
  for (size_t i = 1; i < product_spectrum.size(); ++i) {
    CHECK(product_spectrum[i] == doctest::Approx(0.0).epsilon(1e-12));
  }

  // Random forged states: the spectrum equals the sorted |lambda| list.
  forge::RandomSource rng(20260139);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + static_cast<int>(rng.uniform_int(2));
    const int k = 1 + static_cast<int>(rng.uniform_int(1 << n));
    const SchmidtAnsatz ansatz = oracle::random_ansatz(rng, n, k, false, false);
    const oracle::Vector psi = forged_state(ansatz);

    std::vector<std::complex<double>> amps(static_cast<size_t>(psi.size()));
    for (Eigen::Index i = 0; i < psi.size(); ++i) {
      amps[static_cast<size_t>(i)] = psi(i);
    }
    const auto spectrum = forge::schmidt_spectrum(
        Statevector::from_amplitudes(2 * n, std::move(amps)));

    std::vector<double> expected;
    for (double l : ansatz.lambdas) expected.push_back(std::abs(l));
    std::sort(expected.begin(), expected.end(), std::greater<>());
    expected.resize(spectrum.size(), 0.0);
    for (size_t i = 0; i < spectrum.size(); ++i) {
      CHECK(spectrum[i] == doctest::Approx(expected[i]).epsilon(1e-9));
    }
  }

  CHECK_THROWS_AS(forge::schmidt_spectrum(Statevector::basis_state(3, 0)),
                  forge::InputError);
}

TEST_CASE("truncation residual tracks the kept weight") {
  const std::vector<double> lambdas = {0.8, 0.6};
  CHECK(forge::truncation_residual(lambdas, 0) == doctest::Approx(1.0));
  CHECK(forge::truncation_residual(lambdas, 1) == doctest::Approx(0.36));
  CHECK(std::abs(forge::truncation_residual(lambdas, 2)) < 1e-12);
  CHECK(std::abs(forge::truncation_residual(lambdas, 5)) < 1e-12);
  CHECK_THROWS_AS(forge::truncation_residual(lambdas, -1), forge::InputError);

  // Monotone non-increasing in k for a random normalized spectrum.
  forge::RandomSource rng(20260140);
  std::vector<double> spectrum(6);
  double norm2 = 0.0;
  for (double& l : spectrum) {
    l = rng.uniform() + 0.01;
    norm2 += l * l;
  }
  for (double& l : spectrum) l /= std::sqrt(norm2);
  double prev = forge::truncation_residual(spectrum, 0);
  for (int k = 1; k <= 6; ++k) {
    const double cur = forge::truncation_residual(spectrum, k);
    CHECK(cur <= prev + 1e-15);
    prev = cur;
  }
  CHECK(std::abs(prev) < 1e-12);
}
