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
//
// forgesim: evaluate forged expectation values, budgets, and variational
// runs from Hamiltonian and ansatz text files.
//
//   forgesim --mode expect     --hamiltonian H.txt --ansatz A.txt
//   forgesim --mode compare    --hamiltonian H.txt --ansatz A.txt
//   forgesim --mode budget     --ansatz A.txt --epsilon 0.05
//   forgesim --mode heisenberg --hamiltonian H.txt --ansatz A.txt
//   forgesim --mode vqe        --hamiltonian H.txt --ansatz C.txt --iters 60
//
// Relative input paths are also resolved against $FORGESIM_DATA.  Output
// goes to stdout or --out, and is byte-identical for identical flags.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "forge/ansatz.hpp"
#include "forge/errors.hpp"
#include "forge/forging.hpp"
#include "forge/hamiltonian.hpp"
#include "forge/heisenberg.hpp"
#include "forge/rng.hpp"
#include "forge/statevector.hpp"
#include "forge/text.hpp"
#include "forge/vqe.hpp"

namespace {

struct RunConfig {
  std::string mode;
  std::string hamiltonian_path;
  std::string ansatz_path;
  double epsilon = 0.0;
  long shots = 0;
  uint64_t seed = 1;
  double noise_p1 = 0.0;
  double noise_p2 = 0.0;
  bool zne = false;
  int iters = 100;
  int workers = 0;  // 0: use the available hardware parallelism
  bool product = false;
  std::string out_path;
};

std::string read_file(const std::string& path) {
  namespace fs = std::filesystem;
  std::string resolved = path;
  std::error_code ec;
  if (!fs::exists(resolved, ec)) {
    const char* base = std::getenv("FORGESIM_DATA");
    if (base != nullptr && *base != '\0') {
      const fs::path alt = fs::path(base) / path;
      if (fs::exists(alt, ec)) resolved = alt.string();
    }
  }
  std::ifstream in(resolved, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

int resolve_workers(int workers) {
  if (workers > 0) return workers;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

forge::Hamiltonian load_hamiltonian(const RunConfig& config) {
  if (config.hamiltonian_path.empty()) {
    throw forge::InputError("mode " + config.mode + " needs --hamiltonian");
  }
  return forge::Hamiltonian::parse(read_file(config.hamiltonian_path));
}

forge::SchmidtAnsatz load_ansatz(const RunConfig& config) {
  if (config.ansatz_path.empty()) {
    throw forge::InputError("mode " + config.mode + " needs --ansatz");
  }
  return forge::SchmidtAnsatz::parse(read_file(config.ansatz_path));
}

void require_consistent(const RunConfig& config) {
  if (config.shots < 0) throw forge::InputError("--shots must be nonnegative");
  if (config.epsilon < 0.0) {
    throw forge::InputError("--epsilon must be nonnegative");
  }
  if (config.shots > 0 && config.epsilon > 0.0) {
    throw forge::InputError("choose one of --shots and --epsilon");
  }
  const bool noisy =
      config.noise_p1 > 0.0 || config.noise_p2 > 0.0 || config.zne;
  if (noisy && config.mode != "vqe") {
    throw forge::InputError(
        "--noise-p1/--noise-p2/--zne apply to --mode vqe only");
  }
  if (config.product && config.mode != "expect") {
    throw forge::InputError("--product applies to --mode expect only");
  }
}

// The 2n-qubit state the ansatz describes, over the full register.
forge::Statevector direct_state(const forge::SchmidtAnsatz& ansatz) {
  const int n = ansatz.n;
  if (2 * n > 30) {
    throw forge::InputError("direct evaluation supports at most 30 qubits");
  }
  std::vector<std::complex<double>> amps(uint64_t{1} << (2 * n));
  for (int i = 0; i < ansatz.k(); ++i) {
    const forge::Statevector side1 = forge::apply_circuit(
        forge::Statevector::basis_state(n, ansatz.bitstrings[static_cast<size_t>(i)]),
        ansatz.u);
    const forge::Statevector side2 = forge::apply_circuit(
        forge::Statevector::basis_state(n, ansatz.bitstrings[static_cast<size_t>(i)]),
        ansatz.v_circuit());
    const double lambda = ansatz.lambdas[static_cast<size_t>(i)];
    for (uint64_t x2 = 0; x2 < side2.dim(); ++x2) {
      const std::complex<double> a2 = lambda * side2.amplitude(x2);
      if (a2 == std::complex<double>{}) continue;
      for (uint64_t x1 = 0; x1 < side1.dim(); ++x1) {
        amps[(x2 << n) | x1] += a2 * side1.amplitude(x1);
      }
    }
  }
  return forge::Statevector::from_amplitudes(2 * n, std::move(amps));
}

std::string run_expect(const RunConfig& config) {
  const forge::Hamiltonian hamiltonian = load_hamiltonian(config);
  const forge::SchmidtAnsatz ansatz = load_ansatz(config);
  const bool sampled = config.shots > 0 || config.epsilon > 0.0;
  if (config.product && sampled) {
    throw forge::InputError("--product evaluates exactly; drop --shots");
  }

  struct Row {
    std::string word;
    double coefficient = 0.0;
    double value = 0.0;
    double std_error = 0.0;
  };
  std::vector<Row> rows;
  double energy = 0.0;
  double variance = 0.0;
  long draws = 0;
  double amplification = 1.0;

  if (config.product) {
    for (size_t t = 0; t < hamiltonian.terms().size(); ++t) {
      const auto [o1, o2] = hamiltonian.split(static_cast<int>(t));
      const forge::ProductExpectation pe =
          forge::forged_expectation_product_exact(ansatz, o1, o2);
      const double c = hamiltonian.terms()[t].coefficient;
      rows.push_back({hamiltonian.terms()[t].word.str(), c, pe.value, 0.0});
      energy += c * pe.value;
      amplification = pe.amplification;
    }
  } else if (sampled) {
    long pairs = config.shots;
    if (config.epsilon > 0.0) {
      const forge::SampleBudget budget =
          forge::sampling_budget(ansatz, config.epsilon);
      pairs = (budget.experiments + 1) / 2;
    }
    const int workers = resolve_workers(config.workers);
    for (size_t t = 0; t < hamiltonian.terms().size(); ++t) {
      const auto [o1, o2] = hamiltonian.split(static_cast<int>(t));
      const forge::SampledEstimate est = forge::estimate_sampled(
          ansatz, o1, o2, pairs,
          forge::derive_seed(config.seed, static_cast<uint64_t>(t)), workers);
      const double c = hamiltonian.terms()[t].coefficient;
      rows.push_back(
          {hamiltonian.terms()[t].word.str(), c, est.value, est.std_error});
      energy += c * est.value;
      variance += c * c * est.std_error * est.std_error;
      draws += est.pairs;
    }
  } else {
    forge::ForgedEvaluator evaluator(ansatz);
    for (size_t t = 0; t < hamiltonian.terms().size(); ++t) {
      const auto [o1, o2] = hamiltonian.split(static_cast<int>(t));
      const double value = evaluator.expectation(o1, o2);
      const double c = hamiltonian.terms()[t].coefficient;
      rows.push_back({hamiltonian.terms()[t].word.str(), c, value, 0.0});
      energy += c * value;
    }
  }

  std::string out = "# mode expect\n";
  out += std::string("# route ") +
         (config.product ? "product" : sampled ? "sampled" : "exact") + "\n";
  out += "# energy " + forge::format_double(energy) + "\n";
  if (sampled) {
    out += "# stderr " + forge::format_double(std::sqrt(variance)) + "\n";
    out += "# draws " + std::to_string(draws) + "\n";
  }
  if (config.product) {
    out += "# amplification " + forge::format_double(amplification) + "\n";
  }
  out += "term,coefficient,value,stderr\n";
  for (const Row& row : rows) {
    out += row.word + "," + forge::format_double(row.coefficient) + "," +
           forge::format_double(row.value) + "," +
           forge::format_double(row.std_error) + "\n";
  }
  return out;
}

std::string run_compare(const RunConfig& config) {
  const forge::Hamiltonian hamiltonian = load_hamiltonian(config);
  const forge::SchmidtAnsatz ansatz = load_ansatz(config);
  const forge::Statevector state = direct_state(ansatz);

  forge::ForgedEvaluator evaluator(ansatz);
  std::string rows;
  double energy_forged = 0.0;
  double energy_direct = 0.0;
  double max_diff = 0.0;
  for (size_t t = 0; t < hamiltonian.terms().size(); ++t) {
    const auto [o1, o2] = hamiltonian.split(static_cast<int>(t));
    const double forged = evaluator.expectation(o1, o2);
    const double direct =
        forge::pauli_expectation(state, hamiltonian.terms()[t].word);
    const double c = hamiltonian.terms()[t].coefficient;
    const double diff = std::abs(forged - direct);
    energy_forged += c * forged;
    energy_direct += c * direct;
    max_diff = std::max(max_diff, diff);
    rows += hamiltonian.terms()[t].word.str() + "," +
            forge::format_double(c) + "," + forge::format_double(forged) +
            "," + forge::format_double(direct) + "," +
            forge::format_double(diff) + "\n";
  }
  std::string out = "# mode compare\n";
  out += "# energy_forged " + forge::format_double(energy_forged) + "\n";
  out += "# energy_direct " + forge::format_double(energy_direct) + "\n";
  out += "# max_abs_diff " + forge::format_double(max_diff) + "\n";
  out += "term,coefficient,forged,direct,abs_diff\n" + rows;
  return out;
}

std::string run_budget(const RunConfig& config) {
  const forge::SchmidtAnsatz ansatz = load_ansatz(config);
  if (config.epsilon <= 0.0) {
    throw forge::InputError("mode budget needs --epsilon > 0");
  }
  const forge::SampleBudget budget =
      forge::sampling_budget(ansatz, config.epsilon);
  const std::vector<forge::ForgedTerm> terms =
      forge::enumerate_forged_terms(ansatz);

  std::string out = "# mode budget\n";
  out += "# epsilon " + forge::format_double(budget.epsilon) + "\n";
  out += "# one_norm_exact " + forge::format_double(budget.one_norm) + "\n";
  out += "# one_norm_closed_form " +
         forge::format_double(budget.one_norm_closed_form) + "\n";
  out += "# experiments " + std::to_string(budget.experiments) + "\n";
  out += "index,kind,n,m,p,mu,pi\n";
  for (size_t i = 0; i < terms.size(); ++i) {
    const forge::ForgedTerm& term = terms[i];
    out += std::to_string(i) + ",";
    out += term.kind == forge::PrepKind::Bitstring ? "bitstring"
                                                   : "superposition";
    out += "," + std::to_string(term.n) + "," + std::to_string(term.m) + "," +
           std::to_string(term.p) + "," + forge::format_double(term.mu) + "," +
           forge::format_double(budget.pi[i]) + "\n";
  }
  return out;
}

std::string run_heisenberg(const RunConfig& config) {
  const forge::Hamiltonian hamiltonian = load_hamiltonian(config);
  const forge::SchmidtAnsatz ansatz = load_ansatz(config);
  if (!ansatz.v_same_as_u()) {
    throw forge::InputError(
        "mode heisenberg needs a swap-invariant ansatz (\"V same\")");
  }
  const forge::ExplicitLambdaModel model =
      forge::ExplicitLambdaModel::from_schmidt(ansatz.n, ansatz.bitstrings,
                                               ansatz.lambdas);
  const bool sampled = config.shots > 0 || config.epsilon > 0.0;
  long samples_per_term = config.shots;
  long samples_diagonal = 0;
  if (config.epsilon > 0.0) {
    const forge::HeisenbergBudget budget =
        forge::heisenberg_budget(config.epsilon);
    samples_per_term = budget.samples_per_term;
    samples_diagonal = budget.samples_diagonal;
  }
  const int workers = resolve_workers(config.workers);

  std::string rows;
  double energy = 0.0;
  double variance = 0.0;
  long skipped = 0;
  for (size_t t = 0; t < hamiltonian.terms().size(); ++t) {
    const auto [o1, o2] = hamiltonian.split(static_cast<int>(t));
    const double c = hamiltonian.terms()[t].coefficient;
    double value = 0.0;
    double std_error = 0.0;
    if (sampled) {
      const forge::HeisenbergEstimate est = forge::heisenberg_estimate_sampled(
          ansatz.u, model, o1, o2, samples_per_term,
          forge::derive_seed(config.seed, static_cast<uint64_t>(t)), workers,
          samples_diagonal);
      value = est.value;
      std_error = est.std_error;
      skipped += est.skipped;
    } else {
      value = forge::heisenberg_expectation_exact(ansatz.u, model, o1, o2);
    }
    energy += c * value;
    variance += c * c * std_error * std_error;
    rows += hamiltonian.terms()[t].word.str() + "," + forge::format_double(c) +
            "," + forge::format_double(value) + "," +
            forge::format_double(std_error) + "\n";
  }

  std::string out = "# mode heisenberg\n";
  out += std::string("# route ") + (sampled ? "sampled" : "exact") + "\n";
  out += "# energy " + forge::format_double(energy) + "\n";
  if (sampled) {
    out += "# stderr " + forge::format_double(std::sqrt(variance)) + "\n";
    out += "# skipped " + std::to_string(skipped) + "\n";
  }
  out += "term,coefficient,value,stderr\n" + rows;
  return out;
}

std::string run_vqe(const RunConfig& config) {
  const forge::Hamiltonian hamiltonian = load_hamiltonian(config);
  if (config.ansatz_path.empty()) {
    throw forge::InputError("mode vqe needs --ansatz");
  }
  const forge::AnsatzConfig ansatz =
      forge::AnsatzConfig::parse(read_file(config.ansatz_path));

  forge::VqeRunOptions options;
  options.iterations = config.iters;
  options.seed = config.seed;

  forge::SampledAssembly assembly;
  forge::VqeMode mode = forge::VqeMode::Exact;
  if (config.shots > 0) {
    mode = forge::VqeMode::Sampled;
    assembly.batching.shots_per_copy = config.shots;
    assembly.execution.noise.p1 = config.noise_p1;
    assembly.execution.noise.p2 = config.noise_p2;
    assembly.execution.zne = config.zne;
    options.budget = &assembly;
  } else if (config.noise_p1 > 0.0 || config.noise_p2 > 0.0 || config.zne) {
    throw forge::InputError("noise and --zne need --shots in vqe mode");
  }

  const forge::VqeTrajectory trajectory =
      forge::vqe_run(hamiltonian, ansatz, mode, options);
  return trajectory.csv();
}

std::string sanitize(std::string message) {
  for (char& c : message) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  return message;
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig config;
  CLI::App app{"forged-expectation simulator"};
  app.add_option("--mode", config.mode,
                 "one of expect, vqe, heisenberg, budget, compare")
      ->required()
      ->check(CLI::IsMember({"expect", "vqe", "heisenberg", "budget",
                             "compare"}));
  app.add_option("--hamiltonian", config.hamiltonian_path,
                 "Hamiltonian file (also searched under $FORGESIM_DATA)");
  app.add_option("--ansatz", config.ansatz_path,
                 "ansatz file (also searched under $FORGESIM_DATA)");
  app.add_option("--epsilon", config.epsilon,
                 "target precision for budgets and sampled runs");
  app.add_option("--shots", config.shots,
                 "sampled draws per term (vqe: shots per circuit copy)");
  app.add_option("--seed", config.seed, "random seed (default 1)");
  app.add_option("--noise-p1", config.noise_p1,
                 "single-qubit depolarizing rate (vqe sampled mode)");
  app.add_option("--noise-p2", config.noise_p2,
                 "two-qubit depolarizing rate (vqe sampled mode)");
  app.add_flag("--zne", config.zne,
               "extrapolate sampled vqe estimates to zero noise");
  app.add_option("--iters", config.iters, "optimizer iterations (default 100)");
  app.add_option("--workers", config.workers,
                 "worker threads for sampled estimators (default: hardware)");
  app.add_flag("--product", config.product,
               "use the product-state expansion in expect mode");
  app.add_option("--out", config.out_path, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << "error: usage: " << sanitize(e.what()) << "\n";
    return e.get_exit_code();
  }

  try {
    require_consistent(config);
    std::string output;
    if (config.mode == "expect") {
      output = run_expect(config);
    } else if (config.mode == "compare") {
      output = run_compare(config);
    } else if (config.mode == "budget") {
      output = run_budget(config);
    } else if (config.mode == "heisenberg") {
      output = run_heisenberg(config);
    } else {
      output = run_vqe(config);
    }
    if (config.out_path.empty()) {
      std::cout << output;
    } else {
      std::ofstream out(config.out_path, std::ios::binary);
      if (!out) throw std::runtime_error("cannot write " + config.out_path);
      out << output;
    }
    return 0;
  } catch (const forge::InputError& e) {
    std::cerr << "error: input: " << sanitize(e.what()) << "\n";
  } catch (const forge::ContractError& e) {
    std::cerr << "error: contract: " << sanitize(e.what()) << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: io: " << sanitize(e.what()) << "\n";
  }
  return 1;
}
