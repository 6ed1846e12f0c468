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

#ifndef FORGE_HEISENBERG_HPP
#define FORGE_HEISENBERG_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "forge/circuit.hpp"
#include "forge/clifford.hpp"
#include "forge/forging.hpp"
#include "forge/pauli.hpp"
#include "forge/rng.hpp"

namespace forge {

// Coefficient model for the ansatz sum_x lambda_x (U|x>) (x) (U|x>) over all
// n-qubit bitstrings: the same real circuit U acts on both registers, so the
// state is swap-invariant.  A model supplies (i) sampling x with probability
// lambda_x^2 and (ii) the signed ratio lambda_y / lambda_x.
class LambdaModel {
 public:
  virtual ~LambdaModel() = default;
  virtual int n_qubits() const = 0;
  virtual uint64_t sample_bitstring(RandomSource& rng) const = 0;
  // lambda_y / lambda_x.  Undefined (implementation-reported) when
  // lambda_x == 0; callers with access to an explicit table skip such draws.
  virtual double ratio(uint64_t x, uint64_t y) const = 0;
  // Full signed coefficient table indexed by bitstring, or empty when the
  // model is implicit.  Exact evaluation requires a non-empty table.
  virtual std::span<const double> explicit_coefficients() const { return {}; }
};

// Dense table of 2^n signed coefficients with sum lambda^2 = 1.
class ExplicitLambdaModel final : public LambdaModel {
 public:
  ExplicitLambdaModel(int n_qubits, std::vector<double> lambdas);

  // Spreads a sparse (bitstring, lambda) list over the dense table.  The
  // basis-change circuits of the ansatz are ignored here; pass the ansatz's
  // own U alongside.  Rejects registers too wide for a dense table.
  static ExplicitLambdaModel from_schmidt(int n_qubits,
                                          std::span<const uint64_t> bitstrings,
                                          std::span<const double> lambdas);

  int n_qubits() const override { return n_; }
  uint64_t sample_bitstring(RandomSource& rng) const override;
  double ratio(uint64_t x, uint64_t y) const override;
  double lambda(uint64_t x) const;
  std::span<const double> explicit_coefficients() const override {
    return lambdas_;
  }

 private:
  int n_ = 0;
  std::vector<double> lambdas_;
  std::vector<double> cumulative_;
};

// <O1 (x) O2> on the swap-invariant ansatz above, by decomposing the
// symmetrized observable into Clifford pieces and evaluating each piece by
// dense enumeration over the coefficient table:
//   mu = a0 sum_x lambda_x^2 <x|U'KU|x> + 1/2 sum_j a_j mu_j,
//   mu_j = sum_{x,y} lambda_x lambda_y |<y|U'C_jU|x>|^2.
// Requires an explicit model and a real-valued U (throws ContractError on
// complex entries).  Pairs whose Y-letter counts have opposite parity give
// exactly zero with no state evaluation.
double heisenberg_expectation_exact(const Circuit& u, const LambdaModel& lm,
                                    const PauliString& o1,
                                    const PauliString& o2,
                                    EvalStats* stats = nullptr);

struct HeisenbergEstimate {
  double value = 0.0;
  double std_error = 0.0;
  long skipped = 0;  // draws discarded because lambda_x was exactly zero
};

// Monte-Carlo version: each mu_j is the mean over `samples_per_term` draws of
// the ratio lambda_y / lambda_x with x ~ lambda^2 and y measured from
// U'C_jU|x>; each such ratio has expectation mu_j and second moment exactly 1.
// Diagonal pieces (the a0 term, or the whole value when one observable is the
// identity) instead average one measured eigenvalue per draw, using
// `samples_diagonal` draws (0 means reuse samples_per_term).  Deterministic
// for a fixed seed regardless of `workers`.
HeisenbergEstimate heisenberg_estimate_sampled(
    const Circuit& u, const LambdaModel& lm, const PauliString& o1,
    const PauliString& o2, long samples_per_term, uint64_t seed,
    int workers = 1, long samples_diagonal = 0);

// X gates writing `x`, then U, then cj, then U reversed with every gate
// inverted: applied to |0...0> this prepares U'C_jU|x> (global phase aside).
Circuit conditional_prep_circuit(const Circuit& u, const CliffordCircuit& cj,
                                 uint64_t x);

// Draw counts that target overall 3-sigma precision epsilon: each mu_j is
// allocated epsilon/4 (unit variance bound -> (12/epsilon)^2 draws) and the
// diagonal piece epsilon/2 ((6/epsilon)^2 draws).
struct HeisenbergBudget {
  double epsilon = 0.0;
  long samples_per_term = 0;
  long samples_diagonal = 0;
};

HeisenbergBudget heisenberg_budget(double epsilon);

}  // namespace forge

#endif  // FORGE_HEISENBERG_HPP
