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

#include "forge/ansatz.hpp"

#include <cmath>
#include <set>

#include "forge/errors.hpp"
#include "forge/statevector.hpp"
#include "forge/text.hpp"

namespace forge {

void SchmidtAnsatz::validate() const {
  if (n < 1 || n > 30) {
    throw InputError("qubits per half must lie in 1..30");
  }
  if (bitstrings.empty() || bitstrings.size() != lambdas.size()) {
    throw InputError("need matching, nonempty bitstring and lambda lists");
  }
  std::set<uint64_t> seen;
  for (uint64_t b : bitstrings) {
    if (b >> n) {
      throw InputError("bitstring does not fit the register");
    }
    if (!seen.insert(b).second) {
      throw InputError("bitstrings must be pairwise distinct");
    }
  }
  double norm2 = 0.0;
  for (double l : lambdas) {
    if (!std::isfinite(l)) {
      throw InputError("lambdas must be finite");
    }
    norm2 += l * l;
  }
  if (std::abs(norm2 - 1.0) > 1e-10) {
    throw InputError("squared lambdas must sum to 1 (got " +
                     format_double(norm2) + ")");
  }
  if (u.n_qubits != n || (v && v->n_qubits != n)) {
    throw InputError("circuit register sizes must equal qubits per half");
  }
}

namespace {

// Reads circuit lines until the terminator line "end".
Circuit parse_circuit_block(LineScanner& scanner, int n_qubits) {
  std::string block;
  std::vector<std::string> tokens;
  while (true) {
    if (!scanner.next(tokens)) {
      throw InputError("unterminated circuit block, expected 'end'");
    }
    if (tokens.size() == 1 && tokens[0] == "end") {
      break;
    }
    for (size_t i = 0; i < tokens.size(); ++i) {
      if (i) block += ' ';
      block += tokens[i];
    }
    block += '\n';
  }
  return Circuit::parse(block, n_qubits);
}

}  // namespace

SchmidtAnsatz SchmidtAnsatz::parse(std::string_view text) {
  LineScanner scanner(text);
  SchmidtAnsatz a;

  auto header = scanner.require("header 'n <int> k <int>'");
  if (header.size() != 4 || header[0] != "n" || header[2] != "k") {
    throw scanner.error("expected header 'n <int> k <int>'");
  }
  a.n = static_cast<int>(parse_long(header[1], "qubits per half"));
  const long k = parse_long(header[3], "bitstring count");

  for (long i = 0; i < k; ++i) {
    auto tokens = scanner.require("'bitstring lambda' line");
    if (tokens.size() != 2) {
      throw scanner.error("expected '<bitstring> <lambda>'");
    }
    if (static_cast<int>(tokens[0].size()) != a.n) {
      throw scanner.error("bitstring length must equal n");
    }
    try {
      a.bitstrings.push_back(bits_from_string(tokens[0]));
    } catch (const InputError& e) {
      throw scanner.error(e.what());
    }
    a.lambdas.push_back(parse_double(tokens[1], "lambda"));
  }

  auto u_head = scanner.require("'U' circuit block");
  if (u_head.size() != 1 || u_head[0] != "U") {
    throw scanner.error("expected 'U' starting the circuit block");
  }
  try {
    a.u = parse_circuit_block(scanner, a.n);
  } catch (const InputError& e) {
    throw InputError(std::string("U block: ") + e.what());
  }

  std::vector<std::string> v_head;
  if (scanner.next(v_head)) {
    if (v_head.size() == 2 && v_head[0] == "V" && v_head[1] == "same") {
      // right half reuses U
    } else if (v_head.size() == 1 && v_head[0] == "V") {
      try {
        a.v = parse_circuit_block(scanner, a.n);
      } catch (const InputError& e) {
        throw InputError(std::string("V block: ") + e.what());
      }
    } else {
      throw scanner.error("expected 'V same' or a 'V' circuit block");
    }
    std::vector<std::string> extra;
    if (scanner.next(extra)) {
      throw scanner.error("unexpected content after the ansatz definition");
    }
  }

  a.validate();
  return a;
}

std::string SchmidtAnsatz::str() const {
  validate();
  std::string out = "n " + std::to_string(n) + " k " + std::to_string(k()) +
                    "\n";
  for (int i = 0; i < k(); ++i) {
    out += bits_to_string(bitstrings[static_cast<size_t>(i)], n);
    out += ' ';
    out += format_double(lambdas[static_cast<size_t>(i)]);
    out += '\n';
  }
  out += "U\n";
  out += u.str();
  out += "end\n";
  if (v) {
    out += "V\n";
    out += v->str();
    out += "end\n";
  } else {
    out += "V same\n";
  }
  return out;
}

}  // namespace forge
