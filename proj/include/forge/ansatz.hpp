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

#ifndef FORGE_ANSATZ_HPP
#define FORGE_ANSATZ_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "forge/circuit.hpp"

namespace forge {

// A rank-k bipartite state description: sum_i lambda_i (U|b_i>) x (V|b_i>)
// with n qubits per half.  When `v` is absent the right half reuses `u`, and
// consumers may evaluate each preparation once for both halves.
struct SchmidtAnsatz {
  int n = 0;
  std::vector<uint64_t> bitstrings;
  std::vector<double> lambdas;
  Circuit u;
  std::optional<Circuit> v;

  int k() const { return static_cast<int>(bitstrings.size()); }
  bool v_same_as_u() const { return !v.has_value(); }
  const Circuit& v_circuit() const { return v ? *v : u; }

  // Distinct bitstrings, normalized lambdas, matching register sizes.
  void validate() const;

  // Text form: "n <int> k <int>", then k lines "bitstring lambda", then a
  // circuit block "U" ... "end", then either "V same" or "V" ... "end".
  // parse(str()) reproduces str() byte for byte.
  static SchmidtAnsatz parse(std::string_view text);
  std::string str() const;
};

}  // namespace forge

#endif  // FORGE_ANSATZ_HPP
