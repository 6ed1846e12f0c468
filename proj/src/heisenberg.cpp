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

#include "forge/heisenberg.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <utility>

#include "forge/errors.hpp"
#include "forge/parallel.hpp"
#include "forge/sampling.hpp"
#include "forge/statevector.hpp"
#include "forge/synthesis.hpp"

namespace forge {

namespace {

// Dense coefficient tables get unwieldy past this register size.
constexpr int kMaxExplicitQubits = 20;

// Measurement tables built on demand, keyed by the sampled bitstring.  Reads
// never consume randomness, so results do not depend on cache state.
class LazyTables {
 public:
  explicit LazyTables(std::function<Statevector(uint64_t)> build)
      : build_(std::move(build)) {}

  const MeasurementTable& get(uint64_t x) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = tables_.find(x);
    if (it == tables_.end()) {
      it = tables_.emplace(x, MeasurementTable(build_(x))).first;
    }
    return it->second;
  }

 private:
  std::function<Statevector(uint64_t)> build_;
  std::mutex mutex_;
  std::map<uint64_t, MeasurementTable> tables_;
};

struct StreamResult {
  double mean = 0.0;
  double variance = 0.0;  // unbiased sample variance of the draws
  long valid = 0;
  long skipped = 0;
};

// Averages draw_fn over `draws` attempts in fixed 4096-draw chunks, each with
// its own derived seed, so the result is identical for any worker count.
template <typename DrawFn>
StreamResult run_stream(long draws, uint64_t stream_seed, int workers,
                        DrawFn&& draw_fn) {
  constexpr long kChunk = 4096;
  struct ChunkAccum {
    double sum = 0.0;
    double sumsq = 0.0;
    long valid = 0;
    long skipped = 0;
  };
  const long n_chunks = (draws + kChunk - 1) / kChunk;
  std::vector<ChunkAccum> acc(static_cast<size_t>(n_chunks));
  parallel_chunks(n_chunks, workers, [&](long c) {
    RandomSource rng(derive_seed(stream_seed, static_cast<uint64_t>(c)));
    const long begin = c * kChunk;
    const long end = std::min(draws, begin + kChunk);
    ChunkAccum a;
    for (long i = begin; i < end; ++i) {
      const std::optional<double> v = draw_fn(rng);
      if (!v) {
        ++a.skipped;
        continue;
      }
      a.sum += *v;
      a.sumsq += *v * *v;
      ++a.valid;
    }
    acc[static_cast<size_t>(c)] = a;
  });
  StreamResult r;
  double sum = 0.0;
  double sumsq = 0.0;
  for (const ChunkAccum& a : acc) {
    sum += a.sum;
    sumsq += a.sumsq;
    r.valid += a.valid;
    r.skipped += a.skipped;
  }
  if (r.valid > 0) {
    r.mean = sum / static_cast<double>(r.valid);
    if (r.valid > 1) {
      r.variance = std::max(
          0.0, (sumsq - static_cast<double>(r.valid) * r.mean * r.mean) /
                   static_cast<double>(r.valid - 1));
    }
  }
  return r;
}

void check_widths(const Circuit& u, const LambdaModel& lm,
                  const PauliString& o1, const PauliString& o2) {
  const int n = lm.n_qubits();
  if (u.n_qubits != n || static_cast<int>(o1.size()) != n ||
      static_cast<int>(o2.size()) != n) {
    throw InputError("circuit, coefficient model, and observables must share "
                     "one register size");
  }
}

}  // namespace

ExplicitLambdaModel::ExplicitLambdaModel(int n_qubits,
                                         std::vector<double> lambdas)
    : n_(n_qubits), lambdas_(std::move(lambdas)) {
  if (n_ < 1 || n_ > kMaxExplicitQubits) {
    throw InputError("explicit coefficient table supports 1 to 20 qubits");
  }
  if (lambdas_.size() != (uint64_t{1} << n_)) {
    throw InputError("coefficient table must have one entry per bitstring");
  }
  double norm = 0.0;
  for (double l : lambdas_) {
    if (!std::isfinite(l)) {
      throw InputError("coefficients must be finite");
    }
    norm += l * l;
  }
  if (std::abs(norm - 1.0) > 1e-10) {
    throw InputError("coefficient table must have unit two-norm");
  }
  cumulative_.reserve(lambdas_.size());
  double acc = 0.0;
  for (double l : lambdas_) {
    acc += l * l;
    cumulative_.push_back(acc);
  }
  cumulative_.back() = 1.0;
}

ExplicitLambdaModel ExplicitLambdaModel::from_schmidt(
    int n_qubits, std::span<const uint64_t> bitstrings,
    std::span<const double> lambdas) {
  if (n_qubits < 1 || n_qubits > kMaxExplicitQubits) {
    throw InputError("explicit coefficient table supports 1 to 20 qubits");
  }
  if (bitstrings.size() != lambdas.size() || bitstrings.empty()) {
    throw InputError("bitstring and coefficient lists must match");
  }
  std::vector<double> table(uint64_t{1} << n_qubits, 0.0);
  for (size_t i = 0; i < bitstrings.size(); ++i) {
    if (bitstrings[i] >= table.size()) {
      throw InputError("bitstring does not fit the register");
    }
    if (table[bitstrings[i]] != 0.0) {
      throw InputError("duplicate bitstring in coefficient list");
    }
    table[bitstrings[i]] = lambdas[i];
  }
  return ExplicitLambdaModel(n_qubits, std::move(table));
}

uint64_t ExplicitLambdaModel::sample_bitstring(RandomSource& rng) const {
  return static_cast<uint64_t>(rng.weighted_index(cumulative_));
}

double ExplicitLambdaModel::lambda(uint64_t x) const {
  if (x >= lambdas_.size()) {
    throw InputError("bitstring does not fit the register");
  }
  return lambdas_[x];
}

double ExplicitLambdaModel::ratio(uint64_t x, uint64_t y) const {
  const double lx = lambda(x);
  const double ly = lambda(y);
  if (lx == 0.0) {
    throw ContractError("coefficient ratio undefined: zero denominator");
  }
  return ly / lx;
}

double heisenberg_expectation_exact(const Circuit& u, const LambdaModel& lm,
                                    const PauliString& o1,
                                    const PauliString& o2, EvalStats* stats) {
  check_widths(u, lm, o1, o2);
  const std::span<const double> coeffs = lm.explicit_coefficients();
  if (coeffs.empty()) {
    throw InputError("exact evaluation needs an explicit coefficient table");
  }
  if (stats != nullptr) {
    stats->preparations = 0;
  }
  if (o1.is_identity() && o2.is_identity()) {
    return o1.sign() * o2.sign();
  }
  if (!u.is_real()) {
    throw ContractError(
        "basis-change circuit must have real matrix elements");
  }
  const int n = lm.n_qubits();
  long preps = 0;

  const auto diagonal_sum = [&](const PauliString& word) {
    double acc = 0.0;
    for (uint64_t x = 0; x < coeffs.size(); ++x) {
      const double l = coeffs[x];
      if (l == 0.0) {
        continue;
      }
      const Statevector s =
          apply_circuit(Statevector::basis_state(n, x), u);
      ++preps;
      acc += l * l * pauli_expectation(s, word);
    }
    return acc;
  };

  double value = 0.0;
  if (o2.is_identity()) {
    value = o2.sign() * diagonal_sum(o1);
  } else if (o1.is_identity()) {
    value = o1.sign() * diagonal_sum(o2);
  } else {
    const HeisenbergDecomposition dec = heisenberg_decompose(o1, o2);
    if (dec.vanishes) {
      return 0.0;
    }
    if (dec.a0 != 0.0) {
      value += dec.a0 * diagonal_sum(dec.half_anticommutator);
    }
    for (const WeightedClifford& term : dec.terms) {
      if (term.coefficient == 0.0) {
        continue;
      }
      const Circuit combo =
          u.then(from_clifford(term.circuit)).then(u.inverse());
      double mu_j = 0.0;
      for (uint64_t x = 0; x < coeffs.size(); ++x) {
        const double lx = coeffs[x];
        if (lx == 0.0) {
          continue;
        }
        const Statevector s =
            apply_circuit(Statevector::basis_state(n, x), combo);
        ++preps;
        const auto& amps = s.amplitudes();
        double inner = 0.0;
        for (uint64_t y = 0; y < amps.size(); ++y) {
          const double ly = coeffs[y];
          if (ly != 0.0) {
            inner += ly * std::norm(amps[y]);
          }
        }
        mu_j += lx * inner;
      }
      value += 0.5 * term.coefficient * mu_j;
    }
  }
  if (stats != nullptr) {
    stats->preparations = preps;
  }
  return value;
}

Circuit conditional_prep_circuit(const Circuit& u, const CliffordCircuit& cj,
                                 uint64_t x) {
  if (cj.n_qubits != u.n_qubits || u.n_qubits < 1) {
    throw InputError("circuit widths must match and be positive");
  }
  const int n = u.n_qubits;
  if (n < 64 && x >= (uint64_t{1} << n)) {
    throw InputError("bitstring does not fit the register");
  }
  Circuit c;
  c.n_qubits = n;
  for (int q = 0; q < n; ++q) {
    if ((x >> q) & 1) {
      c.gates.push_back(Gate::one(GateKind::X, q));
    }
  }
  return c.then(u).then(from_clifford(cj)).then(u.inverse());
}

HeisenbergBudget heisenberg_budget(double epsilon) {
  if (!std::isfinite(epsilon) || epsilon <= 0.0) {
    throw InputError("epsilon must be positive and finite");
  }
  HeisenbergBudget b;
  b.epsilon = epsilon;
  b.samples_per_term =
      static_cast<long>(std::ceil((12.0 / epsilon) * (12.0 / epsilon)));
  b.samples_diagonal =
      static_cast<long>(std::ceil((6.0 / epsilon) * (6.0 / epsilon)));
  return b;
}

HeisenbergEstimate heisenberg_estimate_sampled(
    const Circuit& u, const LambdaModel& lm, const PauliString& o1,
    const PauliString& o2, long samples_per_term, uint64_t seed, int workers,
    long samples_diagonal) {
  check_widths(u, lm, o1, o2);
  if (samples_per_term < 1) {
    throw InputError("sample count must be at least 1");
  }
  if (samples_diagonal <= 0) {
    samples_diagonal = samples_per_term;
  }
  HeisenbergEstimate out;
  if (o1.is_identity() && o2.is_identity()) {
    out.value = o1.sign() * o2.sign();
    return out;
  }
  if (!u.is_real()) {
    throw ContractError(
        "basis-change circuit must have real matrix elements");
  }
  const int n = lm.n_qubits();
  const std::span<const double> coeffs = lm.explicit_coefficients();
  const auto defined = [&](uint64_t x) {
    return coeffs.empty() || coeffs[x] != 0.0;
  };

  double value = 0.0;
  double var_acc = 0.0;

  // Mean measured eigenvalue of `word` on U|x> with x ~ lambda^2, times
  // `coefficient`; stream 0 of the seed.
  const auto add_diagonal = [&](const PauliString& word, double coefficient) {
    const Circuit prep = u.then(measurement_basis_circuit(word));
    LazyTables tables([&](uint64_t x) {
      return apply_circuit(Statevector::basis_state(n, x), prep);
    });
    const StreamResult r = run_stream(
        samples_diagonal, derive_seed(seed, 0), workers,
        [&](RandomSource& rng) -> std::optional<double> {
          const uint64_t x = lm.sample_bitstring(rng);
          const uint64_t z = tables.get(x).draw(rng);
          if (!defined(x)) {
            return std::nullopt;
          }
          return static_cast<double>(word.parity_eigenvalue(z));
        });
    value += coefficient * r.mean;
    if (r.valid > 0) {
      var_acc +=
          coefficient * coefficient * r.variance / static_cast<double>(r.valid);
    }
    out.skipped += r.skipped;
  };

  if (o2.is_identity() || o1.is_identity()) {
    if (o2.is_identity()) {
      add_diagonal(o1, o2.sign());
    } else {
      add_diagonal(o2, o1.sign());
    }
    out.value = value;
    out.std_error = std::sqrt(var_acc);
    return out;
  }

  const HeisenbergDecomposition dec = heisenberg_decompose(o1, o2);
  if (dec.vanishes) {
    return out;
  }
  if (dec.a0 != 0.0) {
    add_diagonal(dec.half_anticommutator, dec.a0);
  }
  for (size_t j = 0; j < dec.terms.size(); ++j) {
    const WeightedClifford& term = dec.terms[j];
    if (term.coefficient == 0.0) {
      continue;
    }
    LazyTables tables([&](uint64_t x) {
      return apply_circuit(Statevector(n),
                           conditional_prep_circuit(u, term.circuit, x));
    });
    const StreamResult r = run_stream(
        samples_per_term, derive_seed(seed, 1 + static_cast<uint64_t>(j)),
        workers, [&](RandomSource& rng) -> std::optional<double> {
          const uint64_t x = lm.sample_bitstring(rng);
          const uint64_t y = tables.get(x).draw(rng);
          if (!defined(x)) {
            return std::nullopt;
          }
          return lm.ratio(x, y);
        });
    value += 0.5 * term.coefficient * r.mean;
    if (r.valid > 0) {
      var_acc += 0.25 * term.coefficient * term.coefficient * r.variance /
                 static_cast<double>(r.valid);
    }
    out.skipped += r.skipped;
  }
  out.value = value;
  out.std_error = std::sqrt(var_acc);
  return out;
}

}  // namespace forge
