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

#include "forge/orchestration.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "forge/errors.hpp"
#include "forge/statevector.hpp"

namespace forge {

namespace {

std::string hash_hex(uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(value));
  return std::string(buf);
}

bool has_whitespace(const std::string& s) {
  return s.find_first_of(" \t\r\n") != std::string::npos;
}

}  // namespace

std::vector<long> split_shots(long total, std::span<const double> weights) {
  if (weights.empty()) {
    throw InputError("weight list must be nonempty");
  }
  if (total < static_cast<long>(weights.size())) {
    throw InputError("need at least one shot per weighted slot");
  }
  for (double w : weights) {
    if (!std::isfinite(w) || w <= 0.0) {
      throw InputError("shot-split weights must be positive and finite");
    }
  }
  const size_t n = weights.size();
  double wsum = 0.0;
  for (double w : weights) {
    wsum += w;
  }
  std::vector<long> shots(n, 0);
  std::vector<std::pair<double, size_t>> remainders;
  remainders.reserve(n);
  long used = 0;
  for (size_t i = 0; i < n; ++i) {
    const double exact = static_cast<double>(total) * weights[i] / wsum;
    shots[i] = static_cast<long>(std::floor(exact));
    used += shots[i];
    remainders.push_back({exact - std::floor(exact), i});
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (size_t r = 0; used < total; ++r) {
    ++shots[remainders[r % n].second];
    ++used;
  }
  for (size_t i = 0; i < n; ++i) {
    while (shots[i] < 1) {
      const size_t donor = static_cast<size_t>(
          std::max_element(shots.begin(), shots.end()) - shots.begin());
      --shots[donor];
      ++shots[i];
    }
  }
  return shots;
}

std::vector<long> copysample(std::span<const double> weights, long job_size,
                             RandomSource& rng) {
  if (weights.empty()) {
    throw InputError("weight list must be nonempty");
  }
  double total = 0.0;
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0) {
      throw InputError("weights must be finite and non-negative");
    }
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw InputError("weights must sum to 1");
  }
  const long count = static_cast<long>(weights.size());
  if (job_size < count) {
    throw InputError("job size must cover at least one copy per circuit");
  }
  std::vector<long> counts(static_cast<size_t>(count));
  long used = 0;
  for (size_t i = 0; i < weights.size(); ++i) {
    const double target = weights[i] * static_cast<double>(job_size);
    const long extra =
        std::max(long{0}, static_cast<long>(std::floor(target - 1.0)));
    counts[i] = 1 + extra;
    used += counts[i];
  }
  if (used > job_size) {
    throw InputError(
        "job size too small for the deterministic copy allocation");
  }
  std::vector<double> residual(weights.size());
  std::vector<size_t> pool;
  for (size_t i = 0; i < weights.size(); ++i) {
    residual[i] = weights[i] * static_cast<double>(job_size) -
                  static_cast<double>(counts[i]);
    if (residual[i] > 0.0) {
      pool.push_back(i);
    }
  }
  for (long slot = 0; slot < job_size - used; ++slot) {
    if (pool.empty()) {
      // Unreachable with exact arithmetic; spread round-robin if rounding
      // ever empties the pool early.
      ++counts[static_cast<size_t>(slot) % counts.size()];
      continue;
    }
    double pool_total = 0.0;
    for (size_t idx : pool) {
      pool_total += residual[idx];
    }
    const double r = rng.uniform() * pool_total;
    double acc = 0.0;
    size_t chosen = pool.size() - 1;
    for (size_t j = 0; j < pool.size(); ++j) {
      acc += residual[pool[j]];
      if (r < acc) {
        chosen = j;
        break;
      }
    }
    ++counts[pool[chosen]];
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(chosen));
  }
  return counts;
}

std::vector<std::vector<int>> tpb_group(std::span<const PauliString> paulis) {
  if (paulis.empty()) {
    return {};
  }
  const size_t width = static_cast<size_t>(paulis[0].size());
  for (const PauliString& p : paulis) {
    if (static_cast<size_t>(p.size()) != width) {
      throw InputError("pauli strings must share one length");
    }
  }
  std::vector<std::vector<int>> groups;
  std::vector<std::vector<Pauli>> templates;
  for (size_t i = 0; i < paulis.size(); ++i) {
    bool placed = false;
    for (size_t g = 0; g < groups.size() && !placed; ++g) {
      std::vector<Pauli>& tmpl = templates[g];
      bool fits = true;
      for (size_t q = 0; q < width; ++q) {
        const Pauli letter = paulis[i].letter(static_cast<int>(q));
        if (letter != Pauli::I && tmpl[q] != Pauli::I && tmpl[q] != letter) {
          fits = false;
          break;
        }
      }
      if (fits) {
        for (size_t q = 0; q < width; ++q) {
          const Pauli letter = paulis[i].letter(static_cast<int>(q));
          if (letter != Pauli::I) {
            tmpl[q] = letter;
          }
        }
        groups[g].push_back(static_cast<int>(i));
        placed = true;
      }
    }
    if (!placed) {
      groups.push_back({static_cast<int>(i)});
      templates.emplace_back(width, Pauli::I);
      for (size_t q = 0; q < width; ++q) {
        templates.back()[q] = paulis[i].letter(static_cast<int>(q));
      }
    }
  }
  return groups;
}

void ZneSchedule::validate() const {
  if (factors.size() != weights.size()) {
    throw InputError("schedule needs matching factor and weight lists");
  }
  if (factors.size() < 2) {
    throw InputError("extrapolation needs at least two stretch factors");
  }
  bool has_one = false;
  std::set<int> seen;
  for (int f : factors) {
    if (f < 1 || f % 2 == 0) {
      throw InputError("stretch factors must be positive odd integers");
    }
    if (!seen.insert(f).second) {
      throw InputError("duplicate stretch factor");
    }
    has_one = has_one || f == 1;
  }
  if (!has_one) {
    throw InputError("stretch factor 1 must be present");
  }
  for (double w : weights) {
    if (!std::isfinite(w) || w <= 0.0) {
      throw InputError("schedule weights must be positive and finite");
    }
  }
}

double zne_extrapolate(std::span<const std::pair<double, double>> points) {
  if (points.size() < 2) {
    throw InputError("extrapolation needs at least two points");
  }
  for (size_t i = 0; i < points.size(); ++i) {
    for (size_t j = i + 1; j < points.size(); ++j) {
      if (points[i].first == points[j].first) {
        throw InputError("duplicate stretch factors");
      }
    }
  }
  const double n = static_cast<double>(points.size());
  double sx = 0.0;
  double sy = 0.0;
  double sxx = 0.0;
  double sxy = 0.0;
  for (const auto& [x, y] : points) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = n * sxx - sx * sx;
  return (sxx * sy - sx * sxy) / denom;
}

ZneResult zne_mitigated_expectation(const Circuit& prep,
                                    const PauliString& observable,
                                    const NoiseModel& noise,
                                    const ZneSchedule& schedule,
                                    long total_shots, uint64_t seed) {
  schedule.validate();
  noise.validate();
  if (static_cast<int>(observable.size()) != prep.n_qubits) {
    throw InputError("observable length must equal the circuit width");
  }
  if (total_shots < static_cast<long>(schedule.factors.size())) {
    throw InputError("need at least one shot per stretch factor");
  }
  const std::vector<long> shots = split_shots(total_shots, schedule.weights);
  const Circuit rotation = measurement_basis_circuit(observable);
  ZneResult out;
  for (size_t i = 0; i < schedule.factors.size(); ++i) {
    const int factor = schedule.factors[i];
    const Circuit folded = fold_circuit(prep, factor);
    const Circuit full = folded.then(rotation);
    RandomSource rng(derive_seed(seed, static_cast<uint64_t>(i)));
    const Counts counts = sample_noisy(full, noise, shots[i], rng);
    out.points.push_back(
        {static_cast<double>(factor), counts_expectation(counts, observable)});
  }
  out.mitigated = zne_extrapolate(out.points);
  return out;
}

int Job::n_qubits() const {
  return entries.empty() ? 0 : entries.front().circuit.n_qubits;
}

void Job::validate() const {
  if (entries.empty()) {
    throw InputError("job must contain at least one entry");
  }
  const int width = entries.front().circuit.n_qubits;
  std::set<std::string> seen;
  for (const JobEntry& e : entries) {
    if (e.circuit.n_qubits != width || width < 1) {
      throw InputError("job entries must share one positive register size");
    }
    if (e.circuit.has_unbound_params()) {
      throw InputError("job circuits must have all parameters bound");
    }
    if (e.shots < 1) {
      throw InputError("each entry needs at least one shot");
    }
    if (e.tag.empty() || has_whitespace(e.tag)) {
      throw InputError("tags must be nonempty and contain no whitespace");
    }
    if (!seen.insert(e.tag).second) {
      throw InputError("duplicate tag within a job");
    }
  }
}

std::string Job::manifest() const {
  std::string out;
  for (const JobEntry& e : entries) {
    out += "tag " + e.tag + " circuit " + hash_hex(fnv1a64(e.circuit.str())) +
           " shots " + std::to_string(e.shots) + "\n";
  }
  return out;
}

JobResults execute_job(const Job& job, uint64_t base_seed) {
  job.validate();
  JobResults results(job.entries.size());
  for (size_t e = 0; e < job.entries.size(); ++e) {
    const JobEntry& entry = job.entries[e];
    const Statevector state =
        apply_circuit(Statevector(entry.circuit.n_qubits), entry.circuit);
    const MeasurementTable table(state);
    RandomSource rng(derive_seed(base_seed, fnv1a64(entry.tag)));
    results[e].reserve(static_cast<size_t>(entry.shots));
    for (long s = 0; s < entry.shots; ++s) {
      results[e].push_back(table.draw(rng));
    }
  }
  return results;
}

MultiplexedJob multiplex(std::vector<Job> jobs,
                         const std::vector<int>& offsets, int device_qubits) {
  if (jobs.empty() || jobs.size() != offsets.size()) {
    throw InputError("need exactly one qubit offset per job");
  }
  if (device_qubits < 1 || device_qubits > 30) {
    throw InputError("device must have 1 to 30 qubits");
  }
  for (const Job& job : jobs) {
    job.validate();
  }
  std::vector<std::pair<int, int>> ranges;  // (offset, width), sorted
  for (size_t j = 0; j < jobs.size(); ++j) {
    const int width = jobs[j].n_qubits();
    if (offsets[j] < 0 || offsets[j] + width > device_qubits) {
      throw InputError("layout error: job register outside the device");
    }
    ranges.push_back({offsets[j], width});
  }
  std::sort(ranges.begin(), ranges.end());
  for (size_t r = 1; r < ranges.size(); ++r) {
    if (ranges[r].first < ranges[r - 1].first + ranges[r - 1].second + 1) {
      throw InputError(
          "layout error: qubit ranges overlap or lack a buffer qubit");
    }
  }
  std::set<std::string> tags;
  for (const Job& job : jobs) {
    for (const JobEntry& e : job.entries) {
      if (!tags.insert(e.tag).second) {
        throw InputError("duplicate tag across multiplexed jobs");
      }
    }
  }

  MultiplexedJob mux;
  mux.device_qubits = device_qubits;
  mux.offsets = offsets;
  mux.sources = std::move(jobs);
  size_t max_rounds = 0;
  for (const Job& job : mux.sources) {
    max_rounds = std::max(max_rounds, job.entries.size());
  }
  for (size_t r = 0; r < max_rounds; ++r) {
    std::vector<MuxSlot> slots;
    Circuit wide;
    wide.n_qubits = device_qubits;
    long shots = 0;
    std::string tag;
    for (size_t j = 0; j < mux.sources.size(); ++j) {
      if (r >= mux.sources[j].entries.size()) {
        continue;
      }
      const JobEntry& e = mux.sources[j].entries[r];
      slots.push_back({static_cast<int>(j), static_cast<int>(r), offsets[j],
                       e.circuit.n_qubits, e.shots, e.tag});
      for (Gate gate : e.circuit.gates) {
        gate.q0 += offsets[j];
        if (gate.q1 >= 0) {
          gate.q1 += offsets[j];
        }
        wide.gates.push_back(gate);
      }
      shots = std::max(shots, e.shots);
      tag += (tag.empty() ? "" : "+") + e.tag;
    }
    mux.merged.entries.push_back({std::move(wide), shots, std::move(tag)});
    mux.rounds.push_back(std::move(slots));
  }
  return mux;
}

DeviceSamples execute_multiplexed(const MultiplexedJob& mux,
                                  uint64_t base_seed) {
  DeviceSamples out(mux.rounds.size());
  for (size_t r = 0; r < mux.rounds.size(); ++r) {
    const long round_shots = mux.merged.entries[r].shots;
    std::vector<uint64_t> wide(static_cast<size_t>(round_shots), 0);
    for (const MuxSlot& slot : mux.rounds[r]) {
      const JobEntry& e =
          mux.sources[static_cast<size_t>(slot.job)]
              .entries[static_cast<size_t>(slot.entry)];
      const Statevector state =
          apply_circuit(Statevector(e.circuit.n_qubits), e.circuit);
      const MeasurementTable table(state);
      RandomSource rng(derive_seed(base_seed, fnv1a64(slot.tag)));
      for (long s = 0; s < slot.shots; ++s) {
        wide[static_cast<size_t>(s)] |= table.draw(rng) << slot.offset;
      }
    }
    out[r] = std::move(wide);
  }
  return out;
}

std::vector<JobResults> demultiplex(const MultiplexedJob& mux,
                                    const DeviceSamples& samples) {
  if (samples.size() != mux.rounds.size()) {
    throw InputError("sample rounds do not match the multiplexed job");
  }
  std::vector<JobResults> out(mux.sources.size());
  for (size_t j = 0; j < mux.sources.size(); ++j) {
    out[j].resize(mux.sources[j].entries.size());
  }
  for (size_t r = 0; r < mux.rounds.size(); ++r) {
    for (const MuxSlot& slot : mux.rounds[r]) {
      if (static_cast<long>(samples[r].size()) < slot.shots) {
        throw InputError("round holds fewer samples than requested shots");
      }
      const uint64_t mask = slot.width >= 64
                                ? ~uint64_t{0}
                                : (uint64_t{1} << slot.width) - 1;
      auto& dst = out[static_cast<size_t>(slot.job)]
                     [static_cast<size_t>(slot.entry)];
      dst.reserve(static_cast<size_t>(slot.shots));
      for (long s = 0; s < slot.shots; ++s) {
        dst.push_back((samples[r][static_cast<size_t>(s)] >> slot.offset) &
                      mask);
      }
    }
  }
  return out;
}

}  // namespace forge
