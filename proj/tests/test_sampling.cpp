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
#include <cstdint>
#include <vector>

#include "doctest.h"
#include "forge/circuit.hpp"
#include "forge/errors.hpp"
#include "forge/rng.hpp"
#include "forge/sampling.hpp"
#include "forge/statevector.hpp"

namespace {

using forge::Circuit;
using forge::Counts;
using forge::NoiseModel;
using forge::PauliString;
using forge::RandomSource;
using forge::Statevector;

long total_shots(const Counts& counts) {
  long total = 0;
  for (const auto& [bits, count] : counts) total += count;
  return total;
}

}  // namespace

TEST_CASE("random source streams are deterministic and well-ranged") {
  RandomSource a(123), b(123), c(124);
  CHECK(a.next_u64() == b.next_u64());
  CHECK_FALSE(a.next_u64() == c.next_u64());

  RandomSource rng(7);
  for (int i = 0; i < 1000; ++i) {
    const double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    const int v = rng.uniform_int(7);
    CHECK(v >= 0);
    CHECK(v < 7);
    const int r = rng.rademacher();
    CHECK((r == 1 || r == -1));
  }
  CHECK_THROWS_AS(rng.uniform_int(0), forge::ContractError);
}

TEST_CASE("weighted_index respects the cumulative table") {
  RandomSource rng(99);
  const std::vector<double> cumulative = {0.1, 0.1, 0.6, 1.0};
  std::vector<long> hits(cumulative.size(), 0);
  for (int i = 0; i < 20000; ++i) {
    const int idx = rng.weighted_index(cumulative);
    CHECK(idx >= 0);
    CHECK(idx < 4);
    ++hits[static_cast<size_t>(idx)];
  }
  // Zero-width slot is never drawn; the rest land near their weights.
  CHECK(hits[1] == 0);
  CHECK(std::abs(hits[0] / 20000.0 - 0.1) < 0.02);
  CHECK(std::abs(hits[2] / 20000.0 - 0.5) < 0.02);
  CHECK(std::abs(hits[3] / 20000.0 - 0.4) < 0.02);
}

TEST_CASE("seed derivation separates streams and hashing is standard") {
  CHECK(forge::derive_seed(1, 0) != forge::derive_seed(1, 1));
  CHECK(forge::derive_seed(1, 0) != forge::derive_seed(2, 0));
  CHECK(forge::derive_seed(5, 3) == forge::derive_seed(5, 3));

  // FNV-1a 64-bit reference values.
  CHECK(forge::fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(forge::fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(forge::fnv1a64("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("measurement draws follow the squared amplitudes") {
  // (|00> + |11>)/sqrt(2): only outcomes 0 and 3, each about half.
  const Circuit bell = Circuit::parse("H 1\nCNOT 1 2\n", 2);
  const Statevector state = forge::apply_circuit(Statevector(2), bell);

  RandomSource rng(2026);
  const Counts counts = forge::measure_samples(state, 4000, rng);
  CHECK(total_shots(counts) == 4000);
  CHECK(counts.count(1) == 0);
  CHECK(counts.count(2) == 0);
  CHECK(std::abs(counts.at(0) / 4000.0 - 0.5) < 0.03);
  CHECK(std::abs(counts.at(3) / 4000.0 - 0.5) < 0.03);

  // Identical seeds reproduce identical counts; measure_once agrees with the
  // table-based path.
  RandomSource r1(77), r2(77);
  const Counts c1 = forge::measure_samples(state, 500, r1);
  const Counts c2 = forge::measure_samples(state, 500, r2);
  CHECK(c1 == c2);

  RandomSource r3(77);
  const forge::MeasurementTable table(state);
  Counts c3;
  for (int i = 0; i < 500; ++i) ++c3[table.draw(r3)];
  CHECK(c3 == c1);

  RandomSource r4(31), r5(31);
  CHECK(forge::measure_once(state, r4) == table.draw(r5));
}

TEST_CASE("noise model validation and disabled fast path") {
  NoiseModel ok{0.001, 0.01};
  ok.validate();
  CHECK(ok.enabled());
  CHECK_FALSE(NoiseModel{}.enabled());
  CHECK_THROWS_AS((NoiseModel{-0.1, 0.0}.validate()), forge::InputError);
  CHECK_THROWS_AS((NoiseModel{0.0, 1.5}.validate()), forge::InputError);

  // p = 0 sampling equals ideal sampling draw for draw.
  const Circuit prep = Circuit::parse("H 1\nCNOT 1 2\nRY 2 0.7\n", 2);
  RandomSource ideal_rng(555);
  const Statevector state = forge::apply_circuit(Statevector(2), prep);
  const Counts ideal = forge::measure_samples(state, 300, ideal_rng);
  RandomSource noisy_rng(555);
  const Counts noisy = forge::sample_noisy(prep, NoiseModel{}, 300, noisy_rng);
  CHECK(ideal == noisy);
}

TEST_CASE("full depolarizing noise scrambles a deterministic outcome") {
  // Without noise, X|0> measures 1 always.  With p1 = 1 every gate is
  // followed by a random Pauli, so outcome 0 appears too.
  const Circuit prep = Circuit::parse("X 1\n", 1);
  RandomSource rng(42);
  const Counts counts = forge::sample_noisy(prep, NoiseModel{1.0, 0.0}, 3000, rng);
  CHECK(total_shots(counts) == 3000);
  CHECK(counts.at(0) > 500);
  CHECK(counts.at(1) > 500);
}

TEST_CASE("counts_expectation averages parity eigenvalues") {
  Counts counts;
  counts[0b00] = 600;  // parity +1 for ZZ
  counts[0b11] = 300;  // parity +1
  counts[0b01] = 100;  // parity -1
  const double value = forge::counts_expectation(counts, PauliString::parse("ZZ"));
  CHECK(value == doctest::Approx((600 + 300 - 100) / 1000.0));
  CHECK(forge::counts_expectation(counts, PauliString::parse("-ZZ")) ==
        doctest::Approx(-(600 + 300 - 100) / 1000.0));
  // "IZ" reads Z on qubit 1 (bit 1 of the outcome): 0b00 and 0b01 give +1,
  // 0b11 gives -1.
  CHECK(forge::counts_expectation(counts, PauliString::parse("IZ")) ==
        doctest::Approx((600 - 300 + 100) / 1000.0));
}

TEST_CASE("noiseless noisy_expectation matches the exact expectation") {
  const Circuit prep = Circuit::parse("H 1\nCNOT 1 2\nRY 1 0.9\n", 2);
  const Statevector state = forge::apply_circuit(Statevector(2), prep);
  const PauliString word = PauliString::parse("XZ");
  const double exact = forge::pauli_expectation(state, word);

  RandomSource rng(314159);
  const double sampled =
      forge::noisy_expectation(prep, word, NoiseModel{}, 200000, rng);
  // 200k shots: statistical error well under 0.01 at this fixed seed.
  CHECK(std::abs(sampled - exact) < 0.01);

  // Depolarizing noise pulls the magnitude toward zero.
  RandomSource noisy_rng(314159);
  const double noisy = forge::noisy_expectation(prep, word, NoiseModel{0.2, 0.2},
                                                200000, noisy_rng);
  CHECK(std::abs(noisy) < std::abs(exact));
}
