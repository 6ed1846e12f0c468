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

#ifndef FORGE_SAMPLING_HPP
#define FORGE_SAMPLING_HPP

#include <cstdint>
#include <map>
#include <vector>

#include "forge/circuit.hpp"
#include "forge/rng.hpp"
#include "forge/statevector.hpp"

namespace forge {

// Measurement outcomes keyed by basis-state index.
using Counts = std::map<uint64_t, long>;

// Cumulative |amplitude|^2 table for repeated draws from one state.
class MeasurementTable {
 public:
  explicit MeasurementTable(const Statevector& state);
  uint64_t draw(RandomSource& rng) const;

 private:
  std::vector<double> cumulative_;
};

uint64_t measure_once(const Statevector& state, RandomSource& rng);
Counts measure_samples(const Statevector& state, long shots, RandomSource& rng);

// Depolarizing error rates per executed gate, by gate arity.
struct NoiseModel {
  double p1 = 0.0;
  double p2 = 0.0;

  bool enabled() const { return p1 > 0.0 || p2 > 0.0; }
  void validate() const;  // throws InputError unless both lie in [0, 1]
};

// Runs `prep` from |0...0> once per shot.  After each gate, with probability
// p1 (single-qubit) or p2 (two-qubit), applies a uniformly random
// non-identity Pauli to the gate's qubits, then measures all qubits.
Counts sample_noisy(const Circuit& prep, const NoiseModel& noise, long shots,
                    RandomSource& rng);

// Mean parity eigenvalue of `observable` over counts measured after
// measurement_basis_circuit(observable) was appended to the preparation.
double counts_expectation(const Counts& counts, const PauliString& observable);

// Convenience: noisy estimate of <observable> on the state prep|0...0>,
// including the basis rotation (which is itself subject to noise).
double noisy_expectation(const Circuit& prep, const PauliString& observable,
                         const NoiseModel& noise, long shots,
                         RandomSource& rng);

}  // namespace forge

#endif  // FORGE_SAMPLING_HPP
