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

#ifndef FORGE_ORCHESTRATION_HPP
#define FORGE_ORCHESTRATION_HPP

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "forge/circuit.hpp"
#include "forge/pauli.hpp"
#include "forge/rng.hpp"
#include "forge/sampling.hpp"

namespace forge {

// ---------------------------------------------------------------------------
// Shot allocation across circuit copies.

// Splits `job_size` circuit slots across circuits with normalized weights:
// every circuit gets one copy plus max(0, floor(w_c * J - 1)) deterministic
// extras; the remaining slots go to distinct circuits drawn without
// replacement with probability proportional to the leftover fractional
// weight.  The counts always sum to exactly `job_size`.
std::vector<long> copysample(std::span<const double> weights, long job_size,
                             RandomSource& rng);

// Batching defaults; both knobs are hardware trade-offs with no claimed
// optimum.
struct SamplingConfig {
  long job_size = 800;         // circuit slots per submitted job
  long shots_per_copy = 2000;  // shots taken for each circuit copy
};

// Largest-remainder split of `total` shots proportional to `weights`, with a
// one-shot floor per slot.  Deterministic: remainder ties break toward lower
// indices, floor bumps borrow from the largest allocation.
std::vector<long> split_shots(long total, std::span<const double> weights);

// ---------------------------------------------------------------------------
// Measurement grouping.

// Greedy first-fit grouping of Pauli strings into sets measurable from one
// basis rotation: within a group, each qubit carries at most one distinct
// non-identity letter across all members.  Returns groups of indices into
// `paulis`, in first-fit order.
std::vector<std::vector<int>> tpb_group(std::span<const PauliString> paulis);

// ---------------------------------------------------------------------------
// Zero-noise extrapolation.

// Noise-stretch schedule: odd gate-folding factors (1 = unstretched, which
// must be present) with per-factor sampling weights.  The default weights the
// unstretched circuit twice as heavily as the stretched one.
struct ZneSchedule {
  std::vector<int> factors = {1, 3};
  std::vector<double> weights = {2.0, 1.0};

  void validate() const;  // throws InputError on violations
};

// Least-squares line through (factor, estimate) points, evaluated at factor
// zero.  Needs at least two points with distinct factors; two points (1, E1)
// and (3, E3) give (3 E1 - E3) / 2.
double zne_extrapolate(std::span<const std::pair<double, double>> points);

struct ZneResult {
  double mitigated = 0.0;
  std::vector<std::pair<double, double>> points;  // (factor, raw estimate)
};

// End-to-end mitigated estimate of <observable> on prep|0...0> under
// depolarizing noise: splits `total_shots` across the schedule's factors in
// proportion to the weights (largest-remainder rounding, one shot minimum),
// folds the preparation — not the measurement rotation — by each factor,
// estimates each folded circuit from its own derived seed, and extrapolates
// to zero noise.
ZneResult zne_mitigated_expectation(const Circuit& prep,
                                    const PauliString& observable,
                                    const NoiseModel& noise,
                                    const ZneSchedule& schedule,
                                    long total_shots, uint64_t seed);

// ---------------------------------------------------------------------------
// Simulated job multiplexer.

// One circuit execution request.  Tags route results back to submitters and
// seed the per-entry sample streams, so they must be unique and contain no
// whitespace.
struct JobEntry {
  Circuit circuit;
  long shots = 1;
  std::string tag;
};

struct Job {
  std::vector<JobEntry> entries;

  // Common register width of the entries (0 when empty).
  int n_qubits() const;
  // Nonempty entries of equal width, shots >= 1, unique whitespace-free tags.
  void validate() const;
  // One line per entry: "tag <tag> circuit <16-hex-digit hash> shots <n>".
  std::string manifest() const;
};

// Measured bitstrings per entry, in shot order, parallel to Job::entries.
using JobResults = std::vector<std::vector<uint64_t>>;

// Runs every entry from |0...0> and samples its measurement distribution.
// The sample stream of an entry is seeded from (base_seed, tag) only, so an
// entry draws identical samples whether it runs alone or multiplexed.
JobResults execute_job(const Job& job, uint64_t base_seed);

// Where one origin entry sits inside a merged round.
struct MuxSlot {
  int job = 0;     // index into MultiplexedJob::sources
  int entry = 0;   // index into that job's entries
  int offset = 0;  // first device qubit of the origin register
  int width = 0;
  long shots = 0;
  std::string tag;
};

// Several jobs packed side by side onto one wide simulated device.  Round r
// of the merged job combines entry r of every source job that has one.
struct MultiplexedJob {
  int device_qubits = 0;
  std::vector<Job> sources;
  std::vector<int> offsets;
  Job merged;                                // one wide entry per round
  std::vector<std::vector<MuxSlot>> rounds;  // routing table per round
};

// Validates the layout — every job inside the device, pairwise disjoint
// ranges with at least one idle buffer qubit between neighbours (layout
// errors throw InputError) and unique tags across jobs — then builds the
// merged wide circuits and routing table.  Submissions are merged
// atomically; the caller is the single serialization point.
MultiplexedJob multiplex(std::vector<Job> jobs, const std::vector<int>& offsets,
                         int device_qubits);

// Wide measured samples per merged round.
using DeviceSamples = std::vector<std::vector<uint64_t>>;

// Runs the merged rounds.  Disjoint registers make each round's distribution
// a product, so the wide sample is assembled from per-origin draws on their
// tag-seeded streams; an origin that requested fewer shots than its round
// contributes zero bits to the surplus samples.
DeviceSamples execute_multiplexed(const MultiplexedJob& mux,
                                  uint64_t base_seed);

// Extracts each origin's first `shots` samples from its qubit range.  After
// execute_multiplexed with the same base seed this equals execute_job run on
// every source independently, bit for bit.
std::vector<JobResults> demultiplex(const MultiplexedJob& mux,
                                    const DeviceSamples& samples);

}  // namespace forge

#endif  // FORGE_ORCHESTRATION_HPP
