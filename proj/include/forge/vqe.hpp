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

#ifndef FORGE_VQE_HPP
#define FORGE_VQE_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "forge/ansatz.hpp"
#include "forge/circuit.hpp"
#include "forge/forging.hpp"
#include "forge/hamiltonian.hpp"
#include "forge/orchestration.hpp"
#include "forge/sampling.hpp"

namespace forge {

// One hop gate on an ordered orbital pair, either parameterized (param >= 0)
// or at a fixed angle (param == -1).
struct HopGateSpec {
  int orbital_a = 0;
  int orbital_b = 0;
  int param = -1;
  double angle = 0.0;
};

// Hop-gate ansatz over a set of orbitals, some of which may be frozen at
// fixed occupation.  Active (unfrozen) orbitals map, in ascending order, to
// qubits 0..n-1 of each register half; bitstrings are written over all
// orbitals and must agree on the frozen positions.
struct AnsatzConfig {
  int orbitals = 0;
  std::vector<int> frozen;  // ascending, no duplicates
  bool hf_freeze = false;   // replace the first diagonal h entry by e_hf
  double e_hf = 0.0;        // required when hf_freeze is set
  std::vector<uint64_t> bitstrings;  // over orbitals, bit q = orbital q
  std::vector<HopGateSpec> gates;

  int active_qubits() const {
    return orbitals - static_cast<int>(frozen.size());
  }
  int parameter_count() const;  // distinct parameter ids (validated dense)
  bool is_frozen(int orbital) const;
  int qubit_of_orbital(int orbital) const;  // -1 when frozen
  std::vector<uint64_t> active_bitstrings() const;

  void validate() const;

  // Text form: "orbitals <count>", optional "frozen <i>...", optional
  // "hf_freeze 0|1" and "ehf <value>", then a "bitstrings" ... "end" block of
  // 0/1 strings (leftmost character = orbital 0) and a "gates" ... "end"
  // block of lines "<orbital_a> <orbital_b> <$id or angle>".
  static AnsatzConfig parse(std::string_view text);
  std::string str() const;
};

// Circuit of hop gates for one register half.  Every gate preserves the
// Hamming weight of the register and has a real-valued matrix.
Circuit build_U(const AnsatzConfig& config, std::span<const double> params);

// k x k symmetric coefficient matrix with E(lambda) = lambda^T h lambda.
struct HMatrix {
  int k = 0;
  std::vector<double> values;  // row-major

  double at(int n, int m) const {
    return values[static_cast<size_t>(n) * static_cast<size_t>(k) +
                  static_cast<size_t>(m)];
  }
  double& at(int n, int m) {
    return values[static_cast<size_t>(n) * static_cast<size_t>(k) +
                  static_cast<size_t>(m)];
  }
  void validate() const;  // finite entries, symmetric within 1e-10
};

// Per-entry standard errors accompanying a sampled HMatrix (zero if exact).
struct HMatrixError {
  int k = 0;
  std::vector<double> variances;  // row-major, same layout as HMatrix
};

// Exact assembly: h_nn sums coefficient-weighted diagonal pieces, h_nm
// (n != m) takes half of the phased pair sums, so lambda^T h lambda equals
// the forged energy for every unit lambda.  The lambda values inside
// `ansatz` are ignored.  With hf_freeze the first diagonal entry is the
// supplied E_HF and that preparation is never evolved; `b1_prepared`
// reports whether it was (for instrumentation).
HMatrix assemble_h_matrix_exact(const Hamiltonian& hamiltonian,
                                const SchmidtAnsatz& ansatz,
                                CrossTermPath path = CrossTermPath::Auto,
                                bool hf_freeze = false, double e_hf = 0.0,
                                EvalStats* stats = nullptr,
                                bool* b1_prepared = nullptr);

// How sampled assembly executes circuits.
struct ExecutionModel {
  NoiseModel noise;      // depolarizing rates; zero = ideal sampling
  bool zne = false;      // extrapolate each expectation to zero noise
  ZneSchedule schedule;  // used when zne is set
};

// Shot plan for sampled assembly: measurement circuits are packed into jobs
// of `batching.job_size` copies via copysampling, each copy worth
// `batching.shots_per_copy` shots.
struct SampledAssembly {
  SamplingConfig batching;
  ExecutionModel execution;
};

struct SampledHMatrix {
  HMatrix h;
  HMatrixError error;
  long shots = 0;  // total shots consumed
};

// Shot-sampled assembly: preparations are realized as circuits (X gates or
// the superposition fan-out), split factors are grouped into shared
// measurement bases, shots are allocated by copysampling, and expectation
// values are read from counts — optionally noisy and ZNE-mitigated.
// Deterministic for a fixed seed.
SampledHMatrix assemble_h_matrix_sampled(const Hamiltonian& hamiltonian,
                                         const SchmidtAnsatz& ansatz,
                                         const SampledAssembly& plan,
                                         uint64_t seed,
                                         bool hf_freeze = false,
                                         double e_hf = 0.0);

// Unit-norm eigenvector of the smallest eigenvalue of h; the first component
// above 1e-12 in magnitude is made positive.
std::vector<double> update_lambda(const HMatrix& h);

// lambda^T h lambda.
double hmatrix_energy(const HMatrix& h, std::span<const double> lambdas);

struct VqeRecord {
  int iteration = 0;
  double energy = 0.0;
  double std_error = 0.0;
  std::vector<double> lambdas;
  std::vector<double> thetas;
  long shots = 0;
};

struct VqeTrajectory {
  std::vector<VqeRecord> records;
  double best_energy = 0.0;
  std::vector<double> best_thetas;
  std::vector<double> best_lambdas;
  bool aborted = false;  // a non-finite objective value stopped the run

  // "iteration,energy,stderr,lambda_1..k,theta_1..m,shots" with one header
  // line; floating-point fields print with full round-trip precision.
  std::string csv() const;
};

// Simultaneous-perturbation stochastic approximation settings.  Gain
// schedules: a_k = a/(k+1+A)^alpha and c_k = c/(k+1)^gamma.  With a == 0 the
// step size is calibrated from a gradient probe at the starting point so the
// first step moves by about `target_step`.
struct SpsaConfig {
  double alpha = 0.602;
  double gamma = 0.101;
  double c = 0.1;
  double a = 0.0;
  double stability = -1.0;  // A; negative means 10% of the iteration count
  double target_step = 0.1;
};

using Objective = std::function<double(std::span<const double>)>;

// Minimizes `objective` over theta.  Each iteration draws one Rademacher
// direction, takes the two-sided gradient estimate, steps, and records the
// objective at the new point.  Aborts (flag set) when an evaluation is not
// finite.  Bit-identical trajectories for a fixed seed.
VqeTrajectory spsa_optimize(const Objective& objective,
                            std::vector<double> theta0, int iterations,
                            uint64_t seed, const SpsaConfig& config = {});

enum class VqeMode { Exact, Sampled };

struct VqeRunOptions {
  int iterations = 100;
  uint64_t seed = 1;
  SpsaConfig spsa;
  CrossTermPath path = CrossTermPath::Auto;
  std::vector<double> theta0;              // empty = start at zero
  const SampledAssembly* budget = nullptr; // required in sampled mode
};

// Full driver: per iteration, assembles h for the current parameters,
// updates lambda to the minimal eigenvector (which can only lower the energy
// for fixed h), and steps theta by SPSA.  The optimizer search space is
// theta only.  Gradient evaluations score a parameter point by the minimal
// eigenvalue of its h matrix.
VqeTrajectory vqe_run(const Hamiltonian& hamiltonian,
                      const AnsatzConfig& config, VqeMode mode,
                      const VqeRunOptions& options);

}  // namespace forge

#endif  // FORGE_VQE_HPP
