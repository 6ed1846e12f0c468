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

#ifndef FORGE_FORGING_HPP
#define FORGE_FORGING_HPP

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <tuple>
#include <vector>

#include "forge/ansatz.hpp"
#include "forge/circuit.hpp"
#include "forge/hamiltonian.hpp"
#include "forge/pauli.hpp"
#include "forge/statevector.hpp"

namespace forge {

// A Schmidt-decomposed 2n-qubit state  sum_i lambda_i |b_i>|b_i>  (up to the
// local basis changes U and V) turns a tensor-product observable O1 (x) O2
// into a weighted sum of products of single-register expectation values, one
// product per "forged term".  Each term names an n-qubit preparation and a
// real weight mu.

enum class PrepKind {
  Bitstring,      // |b_n>
  Superposition,  // (|b_n> + i^p |b_m>)/sqrt(2), entangled across qubits
  Product,        // per-qubit superpositions with phase exp(i pi p / (2 d))
};

struct ForgedTerm {
  double mu = 0.0;
  PrepKind kind = PrepKind::Bitstring;
  int n = 0;  // index of the x-side bitstring (n == m for diagonal terms)
  int m = 0;  // index of the y-side bitstring
  int p = 0;  // phase index: 0..3 for Superposition, 0..4d-1 for Product
};

// Diagonal terms (mu = lambda_n^2) plus, for every pair n > m with nonzero
// lambda product, the four phased superpositions with mu = (-1)^p
// lambda_n lambda_m.  Terms with mu == 0 are omitted.
std::vector<ForgedTerm> enumerate_forged_terms(const SchmidtAnsatz& ansatz);

// Alternative cross-term expansion whose preparations are all product
// states: for every pair n < m at Hamming distance d, the 4d phased product
// preparations with mu = (-1)^p lambda_n lambda_m 4^d / (4 d).
std::vector<ForgedTerm> enumerate_product_terms(const SchmidtAnsatz& ansatz);

// (|x> + i^p |y>)/sqrt(2) as an explicit state (x != y, p in 0..3).
Statevector superposition_state(int n_qubits, uint64_t x, uint64_t y, int p);

// Circuit preparing superposition_state(...) from |0...0>, up to a global
// phase: X gates, one Hadamard-family gate on the first differing qubit, and
// CNOTs fanning out to the remaining differing qubits.
Circuit superposition_prep_circuit(int n_qubits, uint64_t x, uint64_t y,
                                   int p);

// One qubit of a product preparation: amplitudes for |0> and |1>.
struct SingleQubitPrep {
  std::complex<double> amp0;
  std::complex<double> amp1;
};

// Per-qubit factors of the Product preparation for (x, y, p): qubit j is
// |x_j> where x and y agree, else (|x_j> + e^{i pi p / (2 d)} |y_j>)/sqrt(2)
// with d the Hamming distance between x and y.
std::vector<SingleQubitPrep> product_prep_factors(int n_qubits, uint64_t x,
                                                  uint64_t y, int p);

// Tensor product of the factors above, as a full state.
Statevector product_state(int n_qubits, uint64_t x, uint64_t y, int p);

// The n-qubit state named by a term (before any basis-change circuit).
Statevector prep_state(const SchmidtAnsatz& ansatz, const ForgedTerm& term);

// How cross terms (n != m) are evaluated.
//   FourPhase: evaluate all four phased superpositions per pair.
//   EvenPhase: evaluate only p = 0 and p = 2 and combine them as
//              (T^0_1 - T^2_1)(T^0_2 - T^2_2)/2 per pair.  Exact when both
//              basis-change circuits are real-valued and both observables
//              contain an even number of Y letters; halves the number of
//              superposition preparations.
//   Auto:      EvenPhase when those conditions hold, FourPhase otherwise.
enum class CrossTermPath { Auto, FourPhase, EvenPhase };

struct EvalStats {
  long preparations = 0;  // states evolved through a basis-change circuit
};

// Evaluates forged expectation values against one ansatz, caching every
// evolved preparation so that repeated calls (e.g. one per Hamiltonian term)
// pay for each circuit application once.
class ForgedEvaluator {
 public:
  explicit ForgedEvaluator(SchmidtAnsatz ansatz);

  const SchmidtAnsatz& ansatz() const { return ansatz_; }

  // <O1 (x) O2> for the forged 2n-qubit state.  Observables act on the first
  // and second n-qubit registers respectively.
  double expectation(const PauliString& o1, const PauliString& o2,
                     CrossTermPath path = CrossTermPath::Auto);

  // T1(b_i) * T2(b_i) without the lambda_i^2 weight.
  double diagonal_piece(int i, const PauliString& o1, const PauliString& o2);

  // sum_p (-1)^p T1 T2 over the pair (hi > lo), without the lambda weights.
  double pair_piece(int hi, int lo, const PauliString& o1,
                    const PauliString& o2,
                    CrossTermPath path = CrossTermPath::Auto);

  // Whether the diagonal preparation for bitstring i has been evolved.
  bool diagonal_prepared(int i) const;

  long preparations() const { return preparations_; }

  // True when the EvenPhase route is exact for these observables.
  bool even_phase_exact(const PauliString& o1, const PauliString& o2) const;

 private:
  struct EvolvedPrep {
    Statevector u_side;
    std::optional<Statevector> v_side;  // empty when V is the same as U
    const Statevector& side2() const { return v_side ? *v_side : u_side; }
  };

  const EvolvedPrep& diagonal_prep(int i);
  const EvolvedPrep& pair_prep(int hi, int lo, int p);
  EvolvedPrep evolve(const Statevector& prep);
  CrossTermPath resolve(const PauliString& o1, const PauliString& o2,
                        CrossTermPath path) const;

  SchmidtAnsatz ansatz_;
  bool u_real_ = false;
  bool v_real_ = false;
  std::vector<std::optional<EvolvedPrep>> diag_;
  std::map<std::tuple<int, int, int>, EvolvedPrep> pairs_;
  long preparations_ = 0;
};

// One-call convenience wrapper over ForgedEvaluator.
double forged_expectation_exact(const SchmidtAnsatz& ansatz,
                                const PauliString& o1, const PauliString& o2,
                                CrossTermPath path = CrossTermPath::Auto,
                                EvalStats* stats = nullptr);

struct ProductExpectation {
  double value = 0.0;
  // 1 + sum_{n<m} |lambda_n lambda_m| 4^{d_{n,m}}: the factor by which the
  // product expansion inflates the sampling one-norm relative to a direct
  // 2n-qubit measurement.
  double amplification = 1.0;
};

// <O1 (x) O2> evaluated through the product-state expansion.
ProductExpectation forged_expectation_product_exact(const SchmidtAnsatz& ansatz,
                                                    const PauliString& o1,
                                                    const PauliString& o2);

// Energy of a bipartite Pauli-sum Hamiltonian: sum of term coefficients
// times forged expectation values, sharing evolved preparations across
// terms.  The Hamiltonian partition must equal the ansatz register size.
double forged_energy_exact(const SchmidtAnsatz& ansatz,
                           const Hamiltonian& hamiltonian,
                           CrossTermPath path = CrossTermPath::Auto,
                           EvalStats* stats = nullptr);

struct SampleBudget {
  double one_norm = 0.0;              // sum_a |mu_a| over enumerated terms
  double one_norm_closed_form = 0.0;  // 1 + 4 ||lambda||_1^2
  double epsilon = 0.0;
  long experiments = 0;               // ceil(200 one_norm^2 / epsilon^2)
  std::vector<double> pi;             // sampling weights |mu_a| / one_norm
};

// Experiment budget for estimating one tensor-product observable to
// absolute precision epsilon with high confidence.
SampleBudget sampling_budget(const SchmidtAnsatz& ansatz, double epsilon);

struct SampledEstimate {
  double value = 0.0;
  double std_error = 0.0;
  long pairs = 0;  // importance-sampled draws consumed (two experiments each)
};

// Monte-Carlo estimate of <O1 (x) O2>: draws term a with probability
// pi_a, samples one measurement outcome per register from the evolved,
// basis-rotated preparation, and averages sgn(mu_a) times the two outcome
// eigenvalues.  Deterministic for a fixed seed regardless of worker count.
SampledEstimate estimate_sampled(const SchmidtAnsatz& ansatz,
                                 const PauliString& o1, const PauliString& o2,
                                 long pairs, uint64_t seed, int workers = 1);

// Schmidt coefficients of a 2n-qubit state across the first/second register
// cut, in descending order.
std::vector<double> schmidt_spectrum(const Statevector& state);

// 1 - sum_{i<k} lambda_i^2: weight lost by keeping only the first k
// coefficients.  k past the end counts every coefficient.
double truncation_residual(std::span<const double> lambdas, int k);

}  // namespace forge

#endif  // FORGE_FORGING_HPP
