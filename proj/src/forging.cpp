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

#include "forge/forging.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <bit>
#include <cmath>
#include <utility>

#include "forge/errors.hpp"
#include "forge/parallel.hpp"
#include "forge/rng.hpp"
#include "forge/sampling.hpp"

namespace forge {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::complex<double> i_power(int p) {
  switch (((p % 4) + 4) % 4) {
    case 0:
      return {1.0, 0.0};
    case 1:
      return {0.0, 1.0};
    case 2:
      return {-1.0, 0.0};
    default:
      return {0.0, -1.0};
  }
}

void check_pair_inputs(int n_qubits, uint64_t x, uint64_t y) {
  if (n_qubits < 1 || n_qubits > 30) {
    throw InputError("qubit count must lie in [1, 30]");
  }
  const uint64_t dim = uint64_t{1} << n_qubits;
  if (x >= dim || y >= dim) {
    throw InputError("bitstring does not fit the register");
  }
  if (x == y) {
    throw InputError("superposition endpoints must differ");
  }
}

void check_observables(const SchmidtAnsatz& ansatz, const PauliString& o1,
                       const PauliString& o2) {
  if (static_cast<int>(o1.size()) != ansatz.n ||
      static_cast<int>(o2.size()) != ansatz.n) {
    throw InputError("observable length must equal the register size");
  }
}

}  // namespace

std::vector<ForgedTerm> enumerate_forged_terms(const SchmidtAnsatz& ansatz) {
  ansatz.validate();
  std::vector<ForgedTerm> terms;
  const int k = ansatz.k();
  for (int i = 0; i < k; ++i) {
    const double mu = ansatz.lambdas[i] * ansatz.lambdas[i];
    if (mu > 0.0) {
      terms.push_back({mu, PrepKind::Bitstring, i, i, 0});
    }
  }
  for (int n = 1; n < k; ++n) {
    for (int m = 0; m < n; ++m) {
      const double c = ansatz.lambdas[n] * ansatz.lambdas[m];
      if (c == 0.0) {
        continue;
      }
      for (int p = 0; p < 4; ++p) {
        terms.push_back({p % 2 == 0 ? c : -c, PrepKind::Superposition, n, m, p});
      }
    }
  }
  return terms;
}

std::vector<ForgedTerm> enumerate_product_terms(const SchmidtAnsatz& ansatz) {
  ansatz.validate();
  std::vector<ForgedTerm> terms;
  const int k = ansatz.k();
  for (int i = 0; i < k; ++i) {
    const double mu = ansatz.lambdas[i] * ansatz.lambdas[i];
    if (mu > 0.0) {
      terms.push_back({mu, PrepKind::Bitstring, i, i, 0});
    }
  }
  for (int n = 0; n + 1 < k; ++n) {
    for (int m = n + 1; m < k; ++m) {
      const double c = ansatz.lambdas[n] * ansatz.lambdas[m];
      if (c == 0.0) {
        continue;
      }
      const int d =
          std::popcount(ansatz.bitstrings[n] ^ ansatz.bitstrings[m]);
      const double coeff = c * std::pow(4.0, d) / (4.0 * d);
      for (int p = 0; p < 4 * d; ++p) {
        terms.push_back(
            {p % 2 == 0 ? coeff : -coeff, PrepKind::Product, n, m, p});
      }
    }
  }
  return terms;
}

Statevector superposition_state(int n_qubits, uint64_t x, uint64_t y, int p) {
  check_pair_inputs(n_qubits, x, y);
  if (p < 0 || p > 3) {
    throw InputError("phase index must lie in [0, 3]");
  }
  std::vector<std::complex<double>> amps(uint64_t{1} << n_qubits);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  amps[x] = {inv_sqrt2, 0.0};
  amps[y] = i_power(p) * inv_sqrt2;
  return Statevector::from_amplitudes(n_qubits, std::move(amps));
}

Circuit superposition_prep_circuit(int n_qubits, uint64_t x, uint64_t y,
                                   int p) {
  check_pair_inputs(n_qubits, x, y);
  if (p < 0 || p > 3) {
    throw InputError("phase index must lie in [0, 3]");
  }
  const uint64_t diff = x ^ y;
  const int pivot = std::countr_zero(diff);
  if ((x >> pivot) & 1) {
    std::swap(x, y);
    p = (4 - p) % 4;
  }
  Circuit c;
  c.n_qubits = n_qubits;
  for (int q = 0; q < n_qubits; ++q) {
    if ((x >> q) & 1) {
      c.gates.push_back(Gate::one(GateKind::X, q));
    }
  }
  c.gates.push_back(Gate::one(GateKind::H, pivot));
  if (p == 2 || p == 3) {
    c.gates.push_back(Gate::one(GateKind::Z, pivot));
  }
  if (p == 1 || p == 3) {
    c.gates.push_back(Gate::one(GateKind::S, pivot));
  }
  for (int q = 0; q < n_qubits; ++q) {
    if (q != pivot && ((diff >> q) & 1)) {
      c.gates.push_back(Gate::two(GateKind::CNOT, pivot, q));
    }
  }
  return c;
}

std::vector<SingleQubitPrep> product_prep_factors(int n_qubits, uint64_t x,
                                                  uint64_t y, int p) {
  check_pair_inputs(n_qubits, x, y);
  const int d = std::popcount(x ^ y);
  if (p < 0 || p >= 4 * d) {
    throw InputError("phase index must lie in [0, 4d)");
  }
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  const std::complex<double> phase =
      std::polar(1.0, kPi * static_cast<double>(p) / (2.0 * d));
  std::vector<SingleQubitPrep> factors(n_qubits);
  for (int q = 0; q < n_qubits; ++q) {
    const int xq = (x >> q) & 1;
    const int yq = (y >> q) & 1;
    SingleQubitPrep& f = factors[q];
    if (xq == yq) {
      (xq ? f.amp1 : f.amp0) = 1.0;
    } else {
      (xq ? f.amp1 : f.amp0) = inv_sqrt2;
      (yq ? f.amp1 : f.amp0) = phase * inv_sqrt2;
    }
  }
  return factors;
}

Statevector product_state(int n_qubits, uint64_t x, uint64_t y, int p) {
  const auto factors = product_prep_factors(n_qubits, x, y, p);
  const uint64_t dim = uint64_t{1} << n_qubits;
  std::vector<std::complex<double>> amps(dim);
  for (uint64_t z = 0; z < dim; ++z) {
    std::complex<double> a{1.0, 0.0};
    for (int q = 0; q < n_qubits && a != std::complex<double>{}; ++q) {
      const SingleQubitPrep& f = factors[q];
      a *= ((z >> q) & 1) ? f.amp1 : f.amp0;
    }
    amps[z] = a;
  }
  return Statevector::from_amplitudes(n_qubits, std::move(amps));
}

Statevector prep_state(const SchmidtAnsatz& ansatz, const ForgedTerm& term) {
  const int k = ansatz.k();
  if (term.n < 0 || term.n >= k || term.m < 0 || term.m >= k) {
    throw InputError("term indexes a bitstring outside the ansatz");
  }
  const uint64_t x = ansatz.bitstrings[term.n];
  const uint64_t y = ansatz.bitstrings[term.m];
  switch (term.kind) {
    case PrepKind::Bitstring:
      return Statevector::basis_state(ansatz.n, x);
    case PrepKind::Superposition:
      return superposition_state(ansatz.n, x, y, term.p);
    case PrepKind::Product:
      return product_state(ansatz.n, x, y, term.p);
  }
  throw ContractError("unknown preparation kind");
}

ForgedEvaluator::ForgedEvaluator(SchmidtAnsatz ansatz)
    : ansatz_(std::move(ansatz)) {
  ansatz_.validate();
  u_real_ = ansatz_.u.is_real();
  v_real_ = ansatz_.v_same_as_u() ? u_real_ : ansatz_.v->is_real();
  diag_.resize(static_cast<size_t>(ansatz_.k()));
}

bool ForgedEvaluator::even_phase_exact(const PauliString& o1,
                                       const PauliString& o2) const {
  return u_real_ && v_real_ && o1.y_count() % 2 == 0 && o2.y_count() % 2 == 0;
}

CrossTermPath ForgedEvaluator::resolve(const PauliString& o1,
                                       const PauliString& o2,
                                       CrossTermPath path) const {
  if (path != CrossTermPath::Auto) {
    return path;
  }
  return even_phase_exact(o1, o2) ? CrossTermPath::EvenPhase
                                  : CrossTermPath::FourPhase;
}

ForgedEvaluator::EvolvedPrep ForgedEvaluator::evolve(const Statevector& prep) {
  EvolvedPrep e;
  e.u_side = apply_circuit(prep, ansatz_.u);
  ++preparations_;
  if (!ansatz_.v_same_as_u()) {
    e.v_side = apply_circuit(prep, *ansatz_.v);
    ++preparations_;
  }
  return e;
}

const ForgedEvaluator::EvolvedPrep& ForgedEvaluator::diagonal_prep(int i) {
  auto& slot = diag_[static_cast<size_t>(i)];
  if (!slot) {
    slot = evolve(Statevector::basis_state(ansatz_.n, ansatz_.bitstrings[i]));
  }
  return *slot;
}

const ForgedEvaluator::EvolvedPrep& ForgedEvaluator::pair_prep(int hi, int lo,
                                                               int p) {
  const auto key = std::make_tuple(hi, lo, p);
  auto it = pairs_.find(key);
  if (it == pairs_.end()) {
    it = pairs_
             .emplace(key, evolve(superposition_state(
                               ansatz_.n, ansatz_.bitstrings[hi],
                               ansatz_.bitstrings[lo], p)))
             .first;
  }
  return it->second;
}

bool ForgedEvaluator::diagonal_prepared(int i) const {
  if (i < 0 || i >= ansatz_.k()) {
    throw InputError("bitstring index out of range");
  }
  return diag_[static_cast<size_t>(i)].has_value();
}

double ForgedEvaluator::diagonal_piece(int i, const PauliString& o1,
                                       const PauliString& o2) {
  if (i < 0 || i >= ansatz_.k()) {
    throw InputError("bitstring index out of range");
  }
  check_observables(ansatz_, o1, o2);
  const EvolvedPrep& e = diagonal_prep(i);
  return pauli_expectation(e.u_side, o1) * pauli_expectation(e.side2(), o2);
}

double ForgedEvaluator::pair_piece(int hi, int lo, const PauliString& o1,
                                   const PauliString& o2, CrossTermPath path) {
  if (lo < 0 || hi <= lo || hi >= ansatz_.k()) {
    throw InputError("pair indices must satisfy 0 <= lo < hi < k");
  }
  check_observables(ansatz_, o1, o2);
  if (resolve(o1, o2, path) == CrossTermPath::EvenPhase) {
    const EvolvedPrep& e0 = pair_prep(hi, lo, 0);
    const EvolvedPrep& e2 = pair_prep(hi, lo, 2);
    const double d1 =
        pauli_expectation(e0.u_side, o1) - pauli_expectation(e2.u_side, o1);
    const double d2 =
        pauli_expectation(e0.side2(), o2) - pauli_expectation(e2.side2(), o2);
    return 0.5 * d1 * d2;
  }
  double acc = 0.0;
  for (int p = 0; p < 4; ++p) {
    const EvolvedPrep& e = pair_prep(hi, lo, p);
    const double t =
        pauli_expectation(e.u_side, o1) * pauli_expectation(e.side2(), o2);
    acc += p % 2 == 0 ? t : -t;
  }
  return acc;
}

double ForgedEvaluator::expectation(const PauliString& o1,
                                    const PauliString& o2,
                                    CrossTermPath path) {
  check_observables(ansatz_, o1, o2);
  if (o1.is_identity() && o2.is_identity()) {
    return o1.sign() * o2.sign();
  }
  const int k = ansatz_.k();
  double acc = 0.0;
  for (int i = 0; i < k; ++i) {
    const double w = ansatz_.lambdas[i] * ansatz_.lambdas[i];
    if (w > 0.0) {
      acc += w * diagonal_piece(i, o1, o2);
    }
  }
  // When one factor is the identity, every phased pair term cancels exactly:
  // the alternating sum of the four superposition projectors vanishes on a
  // single register.
  if (o1.is_identity() || o2.is_identity()) {
    return acc;
  }
  for (int hi = 1; hi < k; ++hi) {
    for (int lo = 0; lo < hi; ++lo) {
      const double c = ansatz_.lambdas[hi] * ansatz_.lambdas[lo];
      if (c != 0.0) {
        acc += c * pair_piece(hi, lo, o1, o2, path);
      }
    }
  }
  return acc;
}

double forged_expectation_exact(const SchmidtAnsatz& ansatz,
                                const PauliString& o1, const PauliString& o2,
                                CrossTermPath path, EvalStats* stats) {
  ForgedEvaluator eval(ansatz);
  const double value = eval.expectation(o1, o2, path);
  if (stats != nullptr) {
    stats->preparations = eval.preparations();
  }
  return value;
}

ProductExpectation forged_expectation_product_exact(const SchmidtAnsatz& ansatz,
                                                    const PauliString& o1,
                                                    const PauliString& o2) {
  ansatz.validate();
  check_observables(ansatz, o1, o2);
  const int k = ansatz.k();
  const bool shared = ansatz.v_same_as_u();
  ProductExpectation out;
  double value = 0.0;
  const auto term_value = [&](const Statevector& prep) {
    const Statevector s1 = apply_circuit(prep, ansatz.u);
    if (shared) {
      return pauli_expectation(s1, o1) * pauli_expectation(s1, o2);
    }
    const Statevector s2 = apply_circuit(prep, *ansatz.v);
    return pauli_expectation(s1, o1) * pauli_expectation(s2, o2);
  };
  for (int i = 0; i < k; ++i) {
    const double w = ansatz.lambdas[i] * ansatz.lambdas[i];
    if (w > 0.0) {
      value +=
          w * term_value(Statevector::basis_state(ansatz.n,
                                                  ansatz.bitstrings[i]));
    }
  }
  for (int n = 0; n + 1 < k; ++n) {
    for (int m = n + 1; m < k; ++m) {
      const double c = ansatz.lambdas[n] * ansatz.lambdas[m];
      if (c == 0.0) {
        continue;
      }
      const uint64_t x = ansatz.bitstrings[n];
      const uint64_t y = ansatz.bitstrings[m];
      const int d = std::popcount(x ^ y);
      const double scale = std::pow(4.0, d);
      out.amplification += std::abs(c) * scale;
      const double coeff = c * scale / (4.0 * d);
      for (int p = 0; p < 4 * d; ++p) {
        const double t = term_value(product_state(ansatz.n, x, y, p));
        value += (p % 2 == 0 ? coeff : -coeff) * t;
      }
    }
  }
  out.value = value;
  return out;
}

double forged_energy_exact(const SchmidtAnsatz& ansatz,
                           const Hamiltonian& hamiltonian, CrossTermPath path,
                           EvalStats* stats) {
  if (hamiltonian.partition() != ansatz.n ||
      hamiltonian.n_qubits() != 2 * ansatz.n) {
    throw InputError("hamiltonian layout does not match the ansatz registers");
  }
  ForgedEvaluator eval(ansatz);
  double acc = 0.0;
  const auto& terms = hamiltonian.terms();
  for (int t = 0; t < static_cast<int>(terms.size()); ++t) {
    const auto [o1, o2] = hamiltonian.split(t);
    acc += terms[static_cast<size_t>(t)].coefficient *
           eval.expectation(o1, o2, path);
  }
  if (stats != nullptr) {
    stats->preparations = eval.preparations();
  }
  return acc;
}

SampleBudget sampling_budget(const SchmidtAnsatz& ansatz, double epsilon) {
  if (!std::isfinite(epsilon) || epsilon <= 0.0) {
    throw InputError("epsilon must be positive and finite");
  }
  const auto terms = enumerate_forged_terms(ansatz);
  SampleBudget budget;
  budget.epsilon = epsilon;
  double one_norm = 0.0;
  for (const ForgedTerm& t : terms) {
    one_norm += std::abs(t.mu);
  }
  double l1 = 0.0;
  for (double lambda : ansatz.lambdas) {
    l1 += std::abs(lambda);
  }
  budget.one_norm = one_norm;
  budget.one_norm_closed_form = 1.0 + 4.0 * l1 * l1;
  budget.experiments = static_cast<long>(
      std::ceil(200.0 * one_norm * one_norm / (epsilon * epsilon)));
  budget.pi.reserve(terms.size());
  for (const ForgedTerm& t : terms) {
    budget.pi.push_back(std::abs(t.mu) / one_norm);
  }
  return budget;
}

SampledEstimate estimate_sampled(const SchmidtAnsatz& ansatz,
                                 const PauliString& o1, const PauliString& o2,
                                 long pairs, uint64_t seed, int workers) {
  ansatz.validate();
  check_observables(ansatz, o1, o2);
  if (pairs < 1) {
    throw InputError("pair count must be at least 1");
  }
  const auto terms = enumerate_forged_terms(ansatz);
  double one_norm = 0.0;
  for (const ForgedTerm& t : terms) {
    one_norm += std::abs(t.mu);
  }

  struct TermTables {
    double sign;
    MeasurementTable side1;
    MeasurementTable side2;
  };
  std::vector<TermTables> tables;
  tables.reserve(terms.size());
  std::vector<double> cumulative;
  cumulative.reserve(terms.size());
  const Circuit rot1 = measurement_basis_circuit(o1);
  const Circuit rot2 = measurement_basis_circuit(o2);
  double acc = 0.0;
  for (const ForgedTerm& t : terms) {
    const Statevector prep = prep_state(ansatz, t);
    Statevector s1 = apply_circuit(prep, ansatz.u);
    apply_circuit_in_place(s1, rot1);
    Statevector s2 = apply_circuit(prep, ansatz.v_circuit());
    apply_circuit_in_place(s2, rot2);
    tables.push_back({t.mu < 0.0 ? -1.0 : 1.0, MeasurementTable(s1),
                      MeasurementTable(s2)});
    acc += std::abs(t.mu) / one_norm;
    cumulative.push_back(acc);
  }
  cumulative.back() = 1.0;

  constexpr long kChunk = 4096;
  const long n_chunks = (pairs + kChunk - 1) / kChunk;
  std::vector<long> sums(static_cast<size_t>(n_chunks), 0);
  parallel_chunks(n_chunks, workers, [&](long c) {
    RandomSource rng(derive_seed(seed, static_cast<uint64_t>(c)));
    const long begin = c * kChunk;
    const long end = std::min(pairs, begin + kChunk);
    long s = 0;
    for (long i = begin; i < end; ++i) {
      const TermTables& t =
          tables[static_cast<size_t>(rng.weighted_index(cumulative))];
      const int e1 = o1.parity_eigenvalue(t.side1.draw(rng));
      const int e2 = o2.parity_eigenvalue(t.side2.draw(rng));
      const int product = e1 * e2;
      s += t.sign > 0.0 ? product : -product;
    }
    sums[static_cast<size_t>(c)] = s;
  });
  long total = 0;
  for (long s : sums) {
    total += s;
  }

  SampledEstimate est;
  est.pairs = pairs;
  const double mean = static_cast<double>(total) / static_cast<double>(pairs);
  est.value = one_norm * mean;
  // Each summand is +-1, so the sample variance is 1 - mean^2 exactly.
  const double variance = std::max(0.0, 1.0 - mean * mean);
  const long dof = pairs > 1 ? pairs - 1 : 1;
  est.std_error = one_norm * std::sqrt(variance / static_cast<double>(dof));
  return est;
}

std::vector<double> schmidt_spectrum(const Statevector& state) {
  const int total = state.n_qubits();
  if (total <= 0 || total % 2 != 0) {
    throw InputError("schmidt spectrum needs an even, positive qubit count");
  }
  const int n = total / 2;
  const auto half = static_cast<Eigen::Index>(uint64_t{1} << n);
  Eigen::MatrixXcd m(half, half);
  for (Eigen::Index y = 0; y < half; ++y) {
    for (Eigen::Index x = 0; x < half; ++x) {
      m(x, y) = state.amplitude(static_cast<uint64_t>(x) |
                                (static_cast<uint64_t>(y) << n));
    }
  }
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
  const auto& sv = svd.singularValues();
  return std::vector<double>(sv.data(), sv.data() + sv.size());
}

double truncation_residual(std::span<const double> lambdas, int k) {
  if (k < 0) {
    throw InputError("truncation rank must be non-negative");
  }
  const size_t limit = std::min(static_cast<size_t>(k), lambdas.size());
  double kept = 0.0;
  for (size_t i = 0; i < limit; ++i) {
    kept += lambdas[i] * lambdas[i];
  }
  return 1.0 - kept;
}

}  // namespace forge
