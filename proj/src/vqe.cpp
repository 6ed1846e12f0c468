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

#include "forge/vqe.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <tuple>
#include <utility>

#include "forge/errors.hpp"
#include "forge/rng.hpp"
#include "forge/statevector.hpp"
#include "forge/text.hpp"

namespace forge {

// ---------------------------------------------------------------------------
// AnsatzConfig

int AnsatzConfig::parameter_count() const {
  std::set<int> ids;
  int max_id = -1;
  for (const HopGateSpec& g : gates) {
    if (g.param < 0) continue;
    ids.insert(g.param);
    max_id = std::max(max_id, g.param);
  }
  if (max_id + 1 != static_cast<int>(ids.size())) {
    throw InputError("parameter ids must form a dense range starting at 0");
  }
  return max_id + 1;
}

bool AnsatzConfig::is_frozen(int orbital) const {
  return std::find(frozen.begin(), frozen.end(), orbital) != frozen.end();
}

int AnsatzConfig::qubit_of_orbital(int orbital) const {
  if (is_frozen(orbital)) return -1;
  int qubit = 0;
  for (int o = 0; o < orbital; ++o) {
    if (!is_frozen(o)) ++qubit;
  }
  return qubit;
}

std::vector<uint64_t> AnsatzConfig::active_bitstrings() const {
  std::vector<uint64_t> active;
  active.reserve(bitstrings.size());
  for (uint64_t bits : bitstrings) {
    uint64_t compact = 0;
    int qubit = 0;
    for (int o = 0; o < orbitals; ++o) {
      if (is_frozen(o)) continue;
      if ((bits >> o) & 1u) compact |= uint64_t{1} << qubit;
      ++qubit;
    }
    active.push_back(compact);
  }
  return active;
}

void AnsatzConfig::validate() const {
  if (orbitals < 1 || orbitals > 63) {
    throw InputError("orbital count must lie in [1, 63]");
  }
  for (size_t i = 0; i < frozen.size(); ++i) {
    if (frozen[i] < 0 || frozen[i] >= orbitals) {
      throw InputError("frozen orbital out of range");
    }
    if (i > 0 && frozen[i] <= frozen[i - 1]) {
      throw InputError("frozen orbitals must be ascending and distinct");
    }
  }
  if (active_qubits() < 1) {
    throw InputError("at least one orbital must stay active");
  }
  if (bitstrings.empty()) {
    throw InputError("ansatz needs at least one bitstring");
  }
  std::set<uint64_t> seen;
  for (uint64_t bits : bitstrings) {
    if (bits >> orbitals) {
      throw InputError("bitstring sets a bit past the last orbital");
    }
    if (!seen.insert(bits).second) {
      throw InputError("bitstrings must be distinct");
    }
    for (int f : frozen) {
      if (((bits >> f) & 1u) != ((bitstrings[0] >> f) & 1u)) {
        throw InputError("bitstrings must agree on every frozen orbital");
      }
    }
  }
  for (const HopGateSpec& g : gates) {
    if (g.orbital_a < 0 || g.orbital_a >= orbitals || g.orbital_b < 0 ||
        g.orbital_b >= orbitals) {
      throw InputError("hop gate orbital out of range");
    }
    if (g.orbital_a == g.orbital_b) {
      throw InputError("hop gate needs two distinct orbitals");
    }
    if (is_frozen(g.orbital_a) || is_frozen(g.orbital_b)) {
      throw InputError("hop gates may not touch frozen orbitals");
    }
    if (g.param < 0 && !std::isfinite(g.angle)) {
      throw InputError("hop gate angle must be finite");
    }
  }
  parameter_count();
  if (hf_freeze && !std::isfinite(e_hf)) {
    throw InputError("hf_freeze requires a finite reference energy");
  }
}

AnsatzConfig AnsatzConfig::parse(std::string_view text) {
  LineScanner scanner(text);
  AnsatzConfig config;
  std::vector<std::string> tokens = scanner.require("\"orbitals <count>\"");
  if (tokens.size() != 2 || tokens[0] != "orbitals") {
    throw scanner.error("expected \"orbitals <count>\"");
  }
  config.orbitals = static_cast<int>(parse_long(tokens[1], "orbital count"));
  bool saw_frozen = false;
  bool saw_hf = false;
  bool saw_ehf = false;
  for (;;) {
    tokens = scanner.require("\"bitstrings\" block");
    if (tokens[0] == "bitstrings") {
      if (tokens.size() != 1) {
        throw scanner.error("unexpected tokens after \"bitstrings\"");
      }
      break;
    }
    if (tokens[0] == "frozen") {
      if (saw_frozen) throw scanner.error("duplicate \"frozen\" line");
      saw_frozen = true;
      for (size_t i = 1; i < tokens.size(); ++i) {
        config.frozen.push_back(
            static_cast<int>(parse_long(tokens[i], "frozen orbital")));
      }
    } else if (tokens[0] == "hf_freeze") {
      if (saw_hf) throw scanner.error("duplicate \"hf_freeze\" line");
      if (tokens.size() != 2 || (tokens[1] != "0" && tokens[1] != "1")) {
        throw scanner.error("expected \"hf_freeze 0|1\"");
      }
      saw_hf = true;
      config.hf_freeze = tokens[1] == "1";
    } else if (tokens[0] == "ehf") {
      if (saw_ehf) throw scanner.error("duplicate \"ehf\" line");
      if (tokens.size() != 2) throw scanner.error("expected \"ehf <value>\"");
      saw_ehf = true;
      config.e_hf = parse_double(tokens[1], "reference energy");
    } else {
      throw scanner.error("unknown line before the \"bitstrings\" block");
    }
  }
  for (;;) {
    tokens = scanner.require("bitstring or \"end\"");
    if (tokens.size() == 1 && tokens[0] == "end") break;
    if (tokens.size() != 1) {
      throw scanner.error("expected one bitstring per line");
    }
    if (static_cast<int>(tokens[0].size()) != config.orbitals) {
      throw scanner.error("bitstring length must match the orbital count");
    }
    config.bitstrings.push_back(bits_from_string(tokens[0]));
  }
  tokens = scanner.require("\"gates\" block");
  if (tokens.size() != 1 || tokens[0] != "gates") {
    throw scanner.error("expected \"gates\"");
  }
  for (;;) {
    tokens = scanner.require("gate line or \"end\"");
    if (tokens.size() == 1 && tokens[0] == "end") break;
    if (tokens.size() != 3) {
      throw scanner.error("expected \"<orbital_a> <orbital_b> <$id or angle>\"");
    }
    HopGateSpec g;
    g.orbital_a = static_cast<int>(parse_long(tokens[0], "gate orbital"));
    g.orbital_b = static_cast<int>(parse_long(tokens[1], "gate orbital"));
    if (!tokens[2].empty() && tokens[2][0] == '$') {
      g.param =
          static_cast<int>(parse_long(tokens[2].substr(1), "parameter id"));
    } else {
      g.angle = parse_double(tokens[2], "gate angle");
    }
    config.gates.push_back(g);
  }
  if (scanner.next(tokens)) {
    throw scanner.error("unexpected line after the \"gates\" block");
  }
  if (config.hf_freeze && !saw_ehf) {
    throw InputError("\"hf_freeze 1\" requires an \"ehf <value>\" line");
  }
  if (saw_ehf && !config.hf_freeze) {
    throw InputError("\"ehf\" line requires \"hf_freeze 1\"");
  }
  config.validate();
  return config;
}

std::string AnsatzConfig::str() const {
  std::string out = "orbitals " + std::to_string(orbitals) + "\n";
  if (!frozen.empty()) {
    out += "frozen";
    for (int f : frozen) out += " " + std::to_string(f);
    out += "\n";
  }
  if (hf_freeze) {
    out += "hf_freeze 1\n";
    out += "ehf " + format_double(e_hf) + "\n";
  }
  out += "bitstrings\n";
  for (uint64_t bits : bitstrings) out += bits_to_string(bits, orbitals) + "\n";
  out += "end\n";
  out += "gates\n";
  for (const HopGateSpec& g : gates) {
    out += std::to_string(g.orbital_a) + " " + std::to_string(g.orbital_b) +
           " ";
    out += g.param >= 0 ? "$" + std::to_string(g.param) : format_double(g.angle);
    out += "\n";
  }
  out += "end\n";
  return out;
}

Circuit build_U(const AnsatzConfig& config, std::span<const double> params) {
  config.validate();
  if (static_cast<int>(params.size()) != config.parameter_count()) {
    throw InputError("parameter vector size must match the parameter count");
  }
  Circuit u;
  u.n_qubits = config.active_qubits();
  for (const HopGateSpec& g : config.gates) {
    const double angle =
        g.param >= 0 ? params[static_cast<size_t>(g.param)] : g.angle;
    if (!std::isfinite(angle)) {
      throw InputError("hop gate angle must be finite");
    }
    u.gates.push_back(Gate::two(GateKind::Hop,
                                config.qubit_of_orbital(g.orbital_a),
                                config.qubit_of_orbital(g.orbital_b), angle));
  }
  return u;
}

// ---------------------------------------------------------------------------
// Coefficient matrix

void HMatrix::validate() const {
  if (k < 1) {
    throw InputError("coefficient matrix needs k >= 1");
  }
  if (values.size() != static_cast<size_t>(k) * static_cast<size_t>(k)) {
    throw InputError("coefficient matrix storage must hold k*k entries");
  }
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw InputError("coefficient matrix entries must be finite");
    }
  }
  for (int n = 0; n < k; ++n) {
    for (int m = n + 1; m < k; ++m) {
      if (std::abs(at(n, m) - at(m, n)) > 1e-10) {
        throw InputError("coefficient matrix must be symmetric");
      }
    }
  }
}

HMatrix assemble_h_matrix_exact(const Hamiltonian& hamiltonian,
                                const SchmidtAnsatz& ansatz, CrossTermPath path,
                                bool hf_freeze, double e_hf, EvalStats* stats,
                                bool* b1_prepared) {
  ansatz.validate();
  if (hamiltonian.partition() != ansatz.n) {
    throw InputError("hamiltonian partition must match the register size");
  }
  if (hf_freeze && !std::isfinite(e_hf)) {
    throw InputError("hf_freeze requires a finite reference energy");
  }
  const int k = ansatz.k();
  HMatrix h;
  h.k = k;
  h.values.assign(static_cast<size_t>(k) * static_cast<size_t>(k), 0.0);
  ForgedEvaluator evaluator(ansatz);
  const auto& terms = hamiltonian.terms();
  for (size_t t = 0; t < terms.size(); ++t) {
    const double c = terms[t].coefficient;
    if (c == 0.0) continue;
    const auto [o1, o2] = hamiltonian.split(static_cast<int>(t));
    for (int d = hf_freeze ? 1 : 0; d < k; ++d) {
      h.at(d, d) += c * evaluator.diagonal_piece(d, o1, o2);
    }
    // Cross terms of identity-sided words vanish phase by phase.
    if (o1.is_identity() || o2.is_identity()) continue;
    for (int hi = 1; hi < k; ++hi) {
      for (int lo = 0; lo < hi; ++lo) {
        h.at(hi, lo) += 0.5 * c * evaluator.pair_piece(hi, lo, o1, o2, path);
      }
    }
  }
  for (int hi = 1; hi < k; ++hi) {
    for (int lo = 0; lo < hi; ++lo) h.at(lo, hi) = h.at(hi, lo);
  }
  if (hf_freeze) h.at(0, 0) = e_hf;
  if (stats) stats->preparations = evaluator.preparations();
  if (b1_prepared) *b1_prepared = evaluator.diagonal_prepared(0);
  h.validate();
  return h;
}

// ---------------------------------------------------------------------------
// Sampled assembly

namespace {

// Estimate with a propagated sampling variance.
struct Est {
  double value = 0.0;
  double variance = 0.0;
};

// Product of two estimates.  With `same_source` the operands are one and the
// same estimate, so the result is its square and the linearized variance
// carries a factor 4 instead of splitting across two independent factors.
Est est_product(const Est& a, const Est& b, bool same_source) {
  Est out;
  out.value = a.value * b.value;
  if (same_source) {
    out.variance = 4.0 * a.value * a.value * a.variance;
  } else {
    out.variance = a.value * a.value * b.variance +
                   b.value * b.value * a.variance + a.variance * b.variance;
  }
  return out;
}

Est est_scale(const Est& a, double s) {
  return {a.value * s, a.variance * s * s};
}

Est est_diff(const Est& a, const Est& b) {
  return {a.value - b.value, a.variance + b.variance};
}

// Mean parity eigenvalue of `word` over `counts`, with the variance of the
// mean of `shots` two-valued outcomes.
Est counts_est(const Counts& counts, const PauliString& word, long shots) {
  Est e;
  e.value = counts_expectation(counts, word);
  const double dof = static_cast<double>(shots > 1 ? shots - 1 : 1);
  e.variance = std::max(0.0, 1.0 - e.value * e.value) / dof;
  return e;
}

// Sort key of a preparation: diagonals first, then superposition pairs by
// (hi, lo, phase).
using PrepKey = std::tuple<int, int, int, int>;

PrepKey diag_key(int n) { return {0, n, 0, 0}; }
PrepKey pair_key(int hi, int lo, int p) { return {1, hi, lo, p}; }

Circuit bitstring_circuit(int n_qubits, uint64_t bits) {
  Circuit c;
  c.n_qubits = n_qubits;
  for (int q = 0; q < n_qubits; ++q) {
    if ((bits >> q) & 1u) c.gates.push_back(Gate::one(GateKind::X, q));
  }
  return c;
}

// Union of the letters of a shared-basis group; each qubit carries at most
// one distinct non-identity letter across the members.
PauliString merged_basis(const std::vector<PauliString>& words,
                         const std::vector<int>& group) {
  PauliString merged =
      PauliString::identity(words[static_cast<size_t>(group[0])].size());
  for (int w : group) {
    const PauliString& word = words[static_cast<size_t>(w)];
    for (int q = 0; q < merged.size(); ++q) {
      if (word.letter(q) != Pauli::I) merged.set_letter(q, word.letter(q));
    }
  }
  return merged;
}

}  // namespace

SampledHMatrix assemble_h_matrix_sampled(const Hamiltonian& hamiltonian,
                                         const SchmidtAnsatz& ansatz,
                                         const SampledAssembly& plan,
                                         uint64_t seed, bool hf_freeze,
                                         double e_hf) {
  ansatz.validate();
  if (hamiltonian.partition() != ansatz.n) {
    throw InputError("hamiltonian partition must match the register size");
  }
  if (hf_freeze && !std::isfinite(e_hf)) {
    throw InputError("hf_freeze requires a finite reference energy");
  }
  if (plan.batching.job_size < 1) {
    throw InputError("job size must be positive");
  }
  if (plan.batching.shots_per_copy < 1) {
    throw InputError("shots per copy must be positive");
  }
  plan.execution.noise.validate();
  if (plan.execution.zne) plan.execution.schedule.validate();

  const int k = ansatz.k();
  const int n = ansatz.n;
  const bool v_same = ansatz.v_same_as_u();
  const bool real_circuits =
      ansatz.u.is_real() && ansatz.v_circuit().is_real();

  // Distinct non-identity split factors, interned, plus per-term routing.
  std::vector<PauliString> words;
  std::map<std::string, int> word_ids;
  auto intern = [&](const PauliString& w) {
    auto [it, inserted] =
        word_ids.try_emplace(w.str(), static_cast<int>(words.size()));
    if (inserted) words.push_back(w);
    return it->second;
  };
  struct TermInfo {
    double c = 0.0;
    int w1 = -1;  // -1 marks an identity factor
    int w2 = -1;
    bool even_phase = false;
  };
  std::vector<TermInfo> infos;
  for (size_t t = 0; t < hamiltonian.terms().size(); ++t) {
    const double c = hamiltonian.terms()[t].coefficient;
    if (c == 0.0) continue;
    const auto [o1, o2] = hamiltonian.split(static_cast<int>(t));
    TermInfo info;
    info.c = c;
    if (!o1.is_identity()) info.w1 = intern(o1);
    if (!o2.is_identity()) info.w2 = intern(o2);
    info.even_phase =
        real_circuits && o1.y_count() % 2 == 0 && o2.y_count() % 2 == 0;
    infos.push_back(info);
  }

  SampledHMatrix out;
  out.h.k = k;
  out.h.values.assign(static_cast<size_t>(k) * static_cast<size_t>(k), 0.0);
  out.error.k = k;
  out.error.variances.assign(static_cast<size_t>(k) * static_cast<size_t>(k),
                             0.0);
  auto var_at = [&out, k](int r, int c) -> double& {
    return out.error.variances[static_cast<size_t>(r) * static_cast<size_t>(k) +
                               static_cast<size_t>(c)];
  };

  // Shared measurement bases over the word pool.
  const std::vector<std::vector<int>> groups = tpb_group(words);
  std::vector<int> group_of(words.size(), -1);
  for (size_t g = 0; g < groups.size(); ++g) {
    for (int w : groups[g]) group_of[static_cast<size_t>(w)] = static_cast<int>(g);
  }

  // Experiments that the assembly below actually reads, as (preparation,
  // register side, basis group).  Pairs take phases {0, 2} when the
  // even-phase route is exact for the term, all four phases otherwise.
  const int side2 = v_same ? 0 : 1;
  std::set<std::tuple<PrepKey, int, int>> needed;
  for (const TermInfo& info : infos) {
    for (int d = hf_freeze ? 1 : 0; d < k; ++d) {
      if (info.w1 >= 0) {
        needed.insert({diag_key(d), 0, group_of[static_cast<size_t>(info.w1)]});
      }
      if (info.w2 >= 0) {
        needed.insert(
            {diag_key(d), side2, group_of[static_cast<size_t>(info.w2)]});
      }
    }
    if (info.w1 < 0 || info.w2 < 0) continue;
    const int n_phases = info.even_phase ? 2 : 4;
    for (int hi = 1; hi < k; ++hi) {
      for (int lo = 0; lo < hi; ++lo) {
        for (int pi = 0; pi < n_phases; ++pi) {
          const int p = info.even_phase ? 2 * pi : pi;
          needed.insert(
              {pair_key(hi, lo, p), 0, group_of[static_cast<size_t>(info.w1)]});
          needed.insert({pair_key(hi, lo, p), side2,
                         group_of[static_cast<size_t>(info.w2)]});
        }
      }
    }
  }

  // Preparation slots in deterministic (sorted) order.
  std::map<PrepKey, int> prep_slot;
  std::vector<PrepKey> prep_keys;
  for (const auto& [key, side, group] : needed) {
    (void)side;
    (void)group;
    if (prep_slot.try_emplace(key, static_cast<int>(prep_keys.size())).second) {
      prep_keys.push_back(key);
    }
  }

  const size_t n_sides = v_same ? 1 : 2;
  std::vector<std::vector<Est>> est(prep_keys.size() * n_sides,
                                    std::vector<Est>(words.size()));

  long total_shots = 0;
  if (!needed.empty()) {
    // One copysampled batch over every experiment with uniform weights; the
    // job grows to fit when there are more experiments than configured slots.
    const long n_exp = static_cast<long>(needed.size());
    const long job = std::max(plan.batching.job_size, n_exp);
    const std::vector<double> weights(static_cast<size_t>(n_exp),
                                      1.0 / static_cast<double>(n_exp));
    RandomSource batch_rng(derive_seed(seed, 0));
    const std::vector<long> copies = copysample(weights, job, batch_rng);

    auto run_counts = [&](const Circuit& circuit, long shots,
                          RandomSource& rng) {
      if (plan.execution.noise.enabled()) {
        return sample_noisy(circuit, plan.execution.noise, shots, rng);
      }
      Statevector state(circuit.n_qubits);
      apply_circuit_in_place(state, circuit);
      const MeasurementTable table(state);
      Counts counts;
      for (long s = 0; s < shots; ++s) ++counts[table.draw(rng)];
      return counts;
    };

    long e_index = 0;
    for (const auto& [key, side, group] : needed) {
      const long shots = copies[static_cast<size_t>(e_index)] *
                         plan.batching.shots_per_copy;
      const auto& [kind, a, b, p] = key;
      const Circuit prep =
          kind == 0 ? bitstring_circuit(n, ansatz.bitstrings[static_cast<size_t>(a)])
                    : superposition_prep_circuit(
                          n, ansatz.bitstrings[static_cast<size_t>(a)],
                          ansatz.bitstrings[static_cast<size_t>(b)], p);
      const Circuit& basis_change = side == 0 ? ansatz.u : ansatz.v_circuit();
      const Circuit physical = prep.then(basis_change);
      const std::vector<int>& members = groups[static_cast<size_t>(group)];
      const Circuit rotation =
          measurement_basis_circuit(merged_basis(words, members));
      const uint64_t stream =
          derive_seed(seed, 1 + static_cast<uint64_t>(e_index));
      std::vector<Est>& cell =
          est[static_cast<size_t>(prep_slot.at(key)) * n_sides +
              static_cast<size_t>(side)];

      if (plan.execution.zne) {
        const ZneSchedule& schedule = plan.execution.schedule;
        const std::vector<long> split = split_shots(shots, schedule.weights);
        std::vector<std::vector<Est>> factor_est(
            schedule.factors.size(), std::vector<Est>(members.size()));
        for (size_t f = 0; f < schedule.factors.size(); ++f) {
          RandomSource rng(
              derive_seed(stream, static_cast<uint64_t>(schedule.factors[f])));
          const Circuit folded =
              fold_circuit(physical, schedule.factors[f]).then(rotation);
          const Counts counts = run_counts(folded, split[f], rng);
          for (size_t wi = 0; wi < members.size(); ++wi) {
            factor_est[f][wi] = counts_est(
                counts, words[static_cast<size_t>(members[wi])], split[f]);
          }
        }
        // Least-squares line through the per-factor estimates, read at zero.
        double sx = 0.0;
        double sxx = 0.0;
        for (int f : schedule.factors) {
          sx += f;
          sxx += static_cast<double>(f) * f;
        }
        const double denom =
            static_cast<double>(schedule.factors.size()) * sxx - sx * sx;
        for (size_t wi = 0; wi < members.size(); ++wi) {
          Est combined;
          for (size_t f = 0; f < schedule.factors.size(); ++f) {
            const double cf = (sxx - sx * schedule.factors[f]) / denom;
            combined.value += cf * factor_est[f][wi].value;
            combined.variance += cf * cf * factor_est[f][wi].variance;
          }
          cell[static_cast<size_t>(members[wi])] = combined;
        }
      } else {
        RandomSource rng(stream);
        const Counts counts = run_counts(physical.then(rotation), shots, rng);
        for (int w : members) {
          cell[static_cast<size_t>(w)] =
              counts_est(counts, words[static_cast<size_t>(w)], shots);
        }
      }
      total_shots += shots;
      ++e_index;
    }
  }

  auto lookup = [&](const PrepKey& key, int side, int word) -> const Est& {
    const size_t s = v_same ? 0 : static_cast<size_t>(side);
    return est[static_cast<size_t>(prep_slot.at(key)) * n_sides + s]
              [static_cast<size_t>(word)];
  };

  for (const TermInfo& info : infos) {
    const bool shared = v_same && info.w1 == info.w2;
    for (int d = hf_freeze ? 1 : 0; d < k; ++d) {
      Est piece{1.0, 0.0};
      if (info.w1 >= 0 && info.w2 >= 0) {
        piece = est_product(lookup(diag_key(d), 0, info.w1),
                            lookup(diag_key(d), 1, info.w2), shared);
      } else if (info.w1 >= 0) {
        piece = lookup(diag_key(d), 0, info.w1);
      } else if (info.w2 >= 0) {
        piece = lookup(diag_key(d), 1, info.w2);
      }
      out.h.at(d, d) += info.c * piece.value;
      var_at(d, d) += info.c * info.c * piece.variance;
    }
    if (info.w1 < 0 || info.w2 < 0) continue;
    for (int hi = 1; hi < k; ++hi) {
      for (int lo = 0; lo < hi; ++lo) {
        Est pair_sum;
        if (info.even_phase) {
          const Est d1 = est_diff(lookup(pair_key(hi, lo, 0), 0, info.w1),
                                  lookup(pair_key(hi, lo, 2), 0, info.w1));
          const Est d2 = est_diff(lookup(pair_key(hi, lo, 0), 1, info.w2),
                                  lookup(pair_key(hi, lo, 2), 1, info.w2));
          pair_sum = est_scale(est_product(d1, d2, shared), 0.5);
        } else {
          for (int p = 0; p < 4; ++p) {
            const Est prod = est_product(lookup(pair_key(hi, lo, p), 0, info.w1),
                                         lookup(pair_key(hi, lo, p), 1, info.w2),
                                         shared);
            pair_sum.value += (p % 2 == 0 ? 1.0 : -1.0) * prod.value;
            pair_sum.variance += prod.variance;
          }
        }
        out.h.at(hi, lo) += 0.5 * info.c * pair_sum.value;
        var_at(hi, lo) += 0.25 * info.c * info.c * pair_sum.variance;
      }
    }
  }
  for (int hi = 1; hi < k; ++hi) {
    for (int lo = 0; lo < hi; ++lo) {
      out.h.at(lo, hi) = out.h.at(hi, lo);
      var_at(lo, hi) = var_at(hi, lo);
    }
  }
  if (hf_freeze) {
    out.h.at(0, 0) = e_hf;
    var_at(0, 0) = 0.0;
  }
  out.shots = total_shots;
  out.h.validate();
  return out;
}

// ---------------------------------------------------------------------------
// Spectrum step and reporting

std::vector<double> update_lambda(const HMatrix& h) {
  h.validate();
  Eigen::MatrixXd m(h.k, h.k);
  for (int r = 0; r < h.k; ++r) {
    for (int c = 0; c < h.k; ++c) m(r, c) = 0.5 * (h.at(r, c) + h.at(c, r));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
  if (solver.info() != Eigen::Success) {
    throw ContractError("eigensolver failed on the coefficient matrix");
  }
  const Eigen::VectorXd ground = solver.eigenvectors().col(0);
  std::vector<double> lambdas(static_cast<size_t>(h.k));
  for (int i = 0; i < h.k; ++i) lambdas[static_cast<size_t>(i)] = ground(i);
  for (double x : lambdas) {
    if (std::abs(x) > 1e-12) {
      if (x < 0.0) {
        for (double& v : lambdas) v = -v;
      }
      break;
    }
  }
  return lambdas;
}

double hmatrix_energy(const HMatrix& h, std::span<const double> lambdas) {
  if (static_cast<int>(lambdas.size()) != h.k) {
    throw InputError("lambda vector size must match the matrix dimension");
  }
  double energy = 0.0;
  for (int r = 0; r < h.k; ++r) {
    for (int c = 0; c < h.k; ++c) {
      energy += lambdas[static_cast<size_t>(r)] * h.at(r, c) *
                lambdas[static_cast<size_t>(c)];
    }
  }
  return energy;
}

std::string VqeTrajectory::csv() const {
  std::string out = "iteration,energy,stderr";
  if (!records.empty()) {
    for (size_t i = 1; i <= records[0].lambdas.size(); ++i) {
      out += ",lambda_" + std::to_string(i);
    }
    for (size_t i = 1; i <= records[0].thetas.size(); ++i) {
      out += ",theta_" + std::to_string(i);
    }
  }
  out += ",shots\n";
  for (const VqeRecord& r : records) {
    out += std::to_string(r.iteration) + "," + format_double(r.energy) + "," +
           format_double(r.std_error);
    for (double l : r.lambdas) out += "," + format_double(l);
    for (double t : r.thetas) out += "," + format_double(t);
    out += "," + std::to_string(r.shots) + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// SPSA

namespace {

// Shared optimizer loop.  `decorate` fills in the trajectory fields that the
// caller tracks per evaluation (spectrum, error bars, shot counts).
VqeTrajectory run_spsa(const Objective& objective, std::vector<double> theta,
                       int iterations, uint64_t seed, const SpsaConfig& config,
                       const std::function<void(VqeRecord&)>& decorate) {
  if (!objective) throw InputError("objective must be callable");
  if (iterations < 1) throw InputError("iteration count must be at least 1");
  if (!(config.c > 0.0) || !std::isfinite(config.c)) {
    throw InputError("spsa perturbation size must be positive");
  }
  if (!(config.alpha > 0.0) || !std::isfinite(config.alpha)) {
    throw InputError("spsa alpha must be positive");
  }
  if (config.gamma < 0.0 || !std::isfinite(config.gamma)) {
    throw InputError("spsa gamma must be nonnegative");
  }
  if (config.a < 0.0 || !std::isfinite(config.a)) {
    throw InputError("spsa step scale must be nonnegative");
  }

  VqeTrajectory traj;
  const size_t m = theta.size();
  RandomSource rng(seed);
  const double big_a =
      config.stability < 0.0 ? 0.1 * iterations : config.stability;

  auto record_point = [&](int iteration, double energy) {
    VqeRecord r;
    r.iteration = iteration;
    r.energy = energy;
    r.thetas = theta;
    if (decorate) decorate(r);
    if (traj.records.empty() || r.energy < traj.best_energy) {
      traj.best_energy = r.energy;
      traj.best_thetas = r.thetas;
      traj.best_lambdas = r.lambdas;
    }
    traj.records.push_back(std::move(r));
  };

  const double e0 = objective(theta);
  if (!std::isfinite(e0)) {
    traj.aborted = true;
    return traj;
  }
  record_point(0, e0);

  if (m == 0) {
    // Nothing to optimize; each iteration is a fresh evaluation.
    for (int it = 1; it <= iterations; ++it) {
      const double e = objective(theta);
      if (!std::isfinite(e)) {
        traj.aborted = true;
        return traj;
      }
      record_point(it, e);
    }
    return traj;
  }

  double a = config.a;
  if (a == 0.0 && iterations > 0) {
    if (!(config.target_step > 0.0) || !std::isfinite(config.target_step)) {
      throw InputError("spsa target step must be positive");
    }
    // Calibrate the gain so the first update moves by about target_step.
    constexpr int kProbes = 5;
    double g_total = 0.0;
    for (int probe = 0; probe < kProbes; ++probe) {
      std::vector<double> plus = theta;
      std::vector<double> minus = theta;
      for (size_t i = 0; i < m; ++i) {
        const double d = static_cast<double>(rng.rademacher());
        plus[i] += config.c * d;
        minus[i] -= config.c * d;
      }
      const double yp = objective(plus);
      const double ym = objective(minus);
      if (!std::isfinite(yp) || !std::isfinite(ym)) {
        traj.aborted = true;
        return traj;
      }
      g_total += std::abs(yp - ym) / (2.0 * config.c);
    }
    const double g_mean = g_total / kProbes;
    a = g_mean < 1e-12
            ? 1.0
            : config.target_step * std::pow(big_a + 1.0, config.alpha) / g_mean;
  }

  for (int it = 1; it <= iterations; ++it) {
    const double ak = a / std::pow(static_cast<double>(it) + big_a, config.alpha);
    const double ck = config.c / std::pow(static_cast<double>(it), config.gamma);
    std::vector<double> delta(m);
    std::vector<double> plus = theta;
    std::vector<double> minus = theta;
    for (size_t i = 0; i < m; ++i) {
      delta[i] = static_cast<double>(rng.rademacher());
      plus[i] += ck * delta[i];
      minus[i] -= ck * delta[i];
    }
    const double yp = objective(plus);
    const double ym = objective(minus);
    if (!std::isfinite(yp) || !std::isfinite(ym)) {
      traj.aborted = true;
      return traj;
    }
    const double slope = (yp - ym) / (2.0 * ck);
    for (size_t i = 0; i < m; ++i) theta[i] -= ak * slope / delta[i];
    const double e = objective(theta);
    if (!std::isfinite(e)) {
      traj.aborted = true;
      return traj;
    }
    record_point(it, e);
  }
  return traj;
}

}  // namespace

VqeTrajectory spsa_optimize(const Objective& objective,
                            std::vector<double> theta0, int iterations,
                            uint64_t seed, const SpsaConfig& config) {
  if (theta0.empty()) {
    throw InputError("initial parameter vector must not be empty");
  }
  return run_spsa(objective, std::move(theta0), iterations, seed, config,
                  nullptr);
}

VqeTrajectory vqe_run(const Hamiltonian& hamiltonian,
                      const AnsatzConfig& config, VqeMode mode,
                      const VqeRunOptions& options) {
  config.validate();
  const int n = config.active_qubits();
  if (hamiltonian.partition() != n) {
    throw InputError("hamiltonian partition must match the active register");
  }
  if (mode == VqeMode::Sampled && options.budget == nullptr) {
    throw InputError("sampled mode needs a shot budget");
  }
  const int params = config.parameter_count();
  std::vector<double> theta0 = options.theta0;
  if (theta0.empty()) theta0.assign(static_cast<size_t>(params), 0.0);
  if (static_cast<int>(theta0.size()) != params) {
    throw InputError("starting point size must match the parameter count");
  }

  // The coefficient matrix does not depend on the Schmidt spectrum, so the
  // evaluation ansatz carries a uniform placeholder.
  SchmidtAnsatz base;
  base.n = n;
  base.bitstrings = config.active_bitstrings();
  base.lambdas.assign(base.bitstrings.size(),
                      1.0 / std::sqrt(static_cast<double>(
                                base.bitstrings.size())));

  struct EvalData {
    double energy = 0.0;
    double std_error = 0.0;
    std::vector<double> lambdas;
  };
  EvalData last;
  long shots_used = 0;
  uint64_t eval_index = 0;
  std::vector<double> prev_lambda;

  const Objective objective = [&](std::span<const double> theta) -> double {
    SchmidtAnsatz ansatz = base;
    ansatz.u = build_U(config, theta);
    HMatrix h;
    HMatrixError err;  // empty in exact mode
    if (mode == VqeMode::Exact) {
      h = assemble_h_matrix_exact(hamiltonian, ansatz, options.path,
                                  config.hf_freeze, config.e_hf);
    } else {
      const uint64_t assembly_seed = derive_seed(options.seed, 1 + eval_index);
      ++eval_index;
      SampledHMatrix sampled =
          assemble_h_matrix_sampled(hamiltonian, ansatz, *options.budget,
                                    assembly_seed, config.hf_freeze,
                                    config.e_hf);
      shots_used += sampled.shots;
      h = std::move(sampled.h);
      err = std::move(sampled.error);
    }
    std::vector<double> lambda = update_lambda(h);
    const double energy = hmatrix_energy(h, lambda);
    if (!prev_lambda.empty() &&
        energy > hmatrix_energy(h, prev_lambda) + 1e-9) {
      throw ContractError("minimal-eigenvector update raised the energy");
    }
    prev_lambda = lambda;
    double std_error = 0.0;
    if (!err.variances.empty()) {
      double var = 0.0;
      for (int r = 0; r < h.k; ++r) {
        for (int c = 0; c <= r; ++c) {
          const double w = r == c ? lambda[static_cast<size_t>(r)] *
                                        lambda[static_cast<size_t>(r)]
                                  : 2.0 * lambda[static_cast<size_t>(r)] *
                                        lambda[static_cast<size_t>(c)];
          var += w * w *
                 err.variances[static_cast<size_t>(r) *
                                   static_cast<size_t>(h.k) +
                               static_cast<size_t>(c)];
        }
      }
      std_error = std::sqrt(var);
    }
    last = EvalData{energy, std_error, std::move(lambda)};
    return energy;
  };

  return run_spsa(objective, std::move(theta0), options.iterations,
                  derive_seed(options.seed, 0), options.spsa,
                  [&](VqeRecord& r) {
                    r.std_error = last.std_error;
                    r.lambdas = last.lambdas;
                    r.shots = shots_used;
                  });
}

}  // namespace forge
