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

#include "forge/sampling.hpp"

#include <cmath>

#include "forge/errors.hpp"

namespace forge {

MeasurementTable::MeasurementTable(const Statevector& state) {
  cumulative_.resize(state.dim());
  double acc = 0.0;
  for (uint64_t i = 0; i < state.dim(); ++i) {
    acc += std::norm(state.amplitude(i));
    cumulative_[i] = acc;
  }
}

uint64_t MeasurementTable::draw(RandomSource& rng) const {
  return static_cast<uint64_t>(rng.weighted_index(cumulative_));
}

uint64_t measure_once(const Statevector& state, RandomSource& rng) {
  return MeasurementTable(state).draw(rng);
}

Counts measure_samples(const Statevector& state, long shots,
                       RandomSource& rng) {
  if (shots < 1) {
    throw InputError("shot count must be at least 1");
  }
  MeasurementTable table(state);
  Counts counts;
  for (long s = 0; s < shots; ++s) {
    ++counts[table.draw(rng)];
  }
  return counts;
}

void NoiseModel::validate() const {
  if (!(p1 >= 0.0 && p1 <= 1.0) || !(p2 >= 0.0 && p2 <= 1.0)) {
    throw InputError("noise probabilities must lie in [0, 1]");
  }
}

namespace {

void apply_random_pauli(Statevector& state, int qubit, RandomSource& rng) {
  static const GateKind kPaulis[3] = {GateKind::X, GateKind::Y, GateKind::Z};
  apply_gate_in_place(state, Gate::one(kPaulis[rng.uniform_int(3)], qubit));
}

void inject_gate_error(Statevector& state, const Gate& gate,
                       RandomSource& rng) {
  if (gate.is_two_qubit()) {
    // Uniform over the 15 non-identity two-qubit Paulis: pick a pair of
    // letters in {I,X,Y,Z}^2 \ {II}.
    const int choice = 1 + rng.uniform_int(15);  // 1..15
    const int l0 = choice / 4;
    const int l1 = choice % 4;
    static const GateKind kPaulis[4] = {GateKind::X, GateKind::X, GateKind::Y,
                                        GateKind::Z};
    if (l0 != 0) {
      apply_gate_in_place(state, Gate::one(kPaulis[l0], gate.q0));
    }
    if (l1 != 0) {
      apply_gate_in_place(state, Gate::one(kPaulis[l1], gate.q1));
    }
  } else {
    apply_random_pauli(state, gate.q0, rng);
  }
}

}  // namespace

Counts sample_noisy(const Circuit& prep, const NoiseModel& noise, long shots,
                    RandomSource& rng) {
  noise.validate();
  if (shots < 1) {
    throw InputError("shot count must be at least 1");
  }
  if (prep.has_unbound_params()) {
    throw ContractError("cannot sample a circuit with unbound parameters");
  }
  if (!noise.enabled()) {
    Statevector state(prep.n_qubits);
    apply_circuit_in_place(state, prep);
    return measure_samples(state, shots, rng);
  }
  Counts counts;
  for (long s = 0; s < shots; ++s) {
    Statevector state(prep.n_qubits);
    for (const Gate& g : prep.gates) {
      apply_gate_in_place(state, g);
      const double p = g.is_two_qubit() ? noise.p2 : noise.p1;
      if (p > 0.0 && rng.uniform() < p) {
        inject_gate_error(state, g, rng);
      }
    }
    ++counts[measure_once(state, rng)];
  }
  return counts;
}

double counts_expectation(const Counts& counts, const PauliString& observable) {
  long total = 0;
  long signed_sum = 0;
  for (const auto& [bits, count] : counts) {
    total += count;
    signed_sum += count * observable.parity_eigenvalue(bits);
  }
  if (total == 0) {
    throw InputError("cannot average an empty counts table");
  }
  return static_cast<double>(signed_sum) / static_cast<double>(total);
}

double noisy_expectation(const Circuit& prep, const PauliString& observable,
                         const NoiseModel& noise, long shots,
                         RandomSource& rng) {
  const Circuit full = prep.then(measurement_basis_circuit(observable));
  return counts_expectation(sample_noisy(full, noise, shots, rng), observable);
}

}  // namespace forge
