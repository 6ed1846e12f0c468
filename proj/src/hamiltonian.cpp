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

#include "forge/hamiltonian.hpp"

#include <cmath>
#include <cstdio>

#include "forge/errors.hpp"
#include "forge/rng.hpp"
#include "forge/text.hpp"

namespace forge {

namespace {

std::string term_line(const HamiltonianTerm& term) {
  std::string line = format_double(term.coefficient);
  line += ' ';
  const std::string word = term.word.str();
  line.append(word, 1, word.size() - 1);  // strip the '+' sign prefix
  return line;
}

}  // namespace

Hamiltonian::Hamiltonian(int n_qubits, int partition,
                         std::vector<HamiltonianTerm> terms)
    : n_qubits_(n_qubits), partition_(partition), terms_(std::move(terms)) {
  if (n_qubits_ < 1) {
    throw InputError("operator must act on at least one qubit");
  }
  if (partition_ < 1 || partition_ >= n_qubits_) {
    throw InputError("partition must split the register into two parts");
  }
  for (auto& term : terms_) {
    if (!std::isfinite(term.coefficient)) {
      throw InputError("term coefficient must be finite");
    }
    if (term.word.size() != n_qubits_) {
      throw InputError("term word length does not match the qubit count");
    }
    if (term.word.sign() < 0) {
      term.coefficient = -term.coefficient;
      term.word = term.word.unsigned_word();
    }
  }
}

std::pair<PauliString, PauliString> Hamiltonian::split(int term_index) const {
  const PauliString& word = terms_[static_cast<size_t>(term_index)].word;
  std::vector<Pauli> left(word.letters().begin(),
                          word.letters().begin() + partition_);
  std::vector<Pauli> right(word.letters().begin() + partition_,
                           word.letters().end());
  return {PauliString(std::move(left)), PauliString(std::move(right))};
}

bool Hamiltonian::real_split_factors() const {
  for (int t = 0; t < static_cast<int>(terms_.size()); ++t) {
    const auto [left, right] = split(t);
    if (left.y_count() % 2 != 0 || right.y_count() % 2 != 0) {
      return false;
    }
  }
  return true;
}

uint64_t Hamiltonian::checksum() const {
  std::string canonical;
  for (const auto& term : terms_) {
    canonical += term_line(term);
    canonical += '\n';
  }
  return fnv1a64(canonical);
}

Hamiltonian Hamiltonian::parse(std::string_view text) {
  LineScanner scanner(text);

  auto header = scanner.require("header 'qubits <count> [partition <count>]'");
  if (header.size() < 2 || header[0] != "qubits") {
    throw scanner.error("expected header 'qubits <count> [partition <count>]'");
  }
  const long qubits = parse_long(header[1], "qubit count");
  long partition = -1;
  if (header.size() == 4 && header[2] == "partition") {
    partition = parse_long(header[3], "partition");
  } else if (header.size() != 2) {
    throw scanner.error("malformed header");
  }
  if (partition < 0) {
    if (qubits % 2 != 0) {
      throw scanner.error(
          "odd qubit count requires an explicit partition in the header");
    }
    partition = qubits / 2;
  }

  std::vector<HamiltonianTerm> terms;
  bool expect_manifest = false;
  long manifest_terms = 0;
  std::string manifest_checksum;
  std::vector<std::string> tokens;
  while (scanner.next(tokens)) {
    if (tokens[0] == "manifest") {
      if (expect_manifest || !terms.empty()) {
        throw scanner.error("manifest line must appear once, before any term");
      }
      if (tokens.size() != 3) {
        throw scanner.error("manifest line needs '<terms> <checksum>'");
      }
      expect_manifest = true;
      manifest_terms = parse_long(tokens[1], "manifest term count");
      manifest_checksum = tokens[2];
      continue;
    }
    if (tokens.size() != 2) {
      throw scanner.error("expected '<coefficient> <pauli word>'");
    }
    HamiltonianTerm term;
    term.coefficient = parse_double(tokens[0], "term coefficient");
    try {
      term.word = PauliString::parse(tokens[1]);
    } catch (const InputError& e) {
      throw scanner.error(e.what());
    }
    if (term.word.size() != qubits) {
      throw scanner.error("term word length does not match the header");
    }
    terms.push_back(std::move(term));
  }

  Hamiltonian h(static_cast<int>(qubits), static_cast<int>(partition),
                std::move(terms));
  h.has_manifest_ = expect_manifest;
  if (expect_manifest) {
    if (manifest_terms != static_cast<long>(h.terms_.size())) {
      throw InputError("manifest term count does not match the file");
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(h.checksum()));
    if (manifest_checksum != buf) {
      throw InputError("manifest checksum mismatch: file lists " +
                       manifest_checksum + ", terms hash to " + buf);
    }
  }
  return h;
}

std::string Hamiltonian::str() const {
  std::string out = "qubits " + std::to_string(n_qubits_) + " partition " +
                    std::to_string(partition_) + "\n";
  if (has_manifest_) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(checksum()));
    out += "manifest " + std::to_string(terms_.size()) + " " + buf + "\n";
  }
  for (const auto& term : terms_) {
    out += term_line(term);
    out += '\n';
  }
  return out;
}

}  // namespace forge
