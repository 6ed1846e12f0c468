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

#include "forge/circuit.hpp"

#include <cmath>
#include <cstdlib>
#include <map>
#include <sstream>

#include "forge/errors.hpp"
#include "forge/text.hpp"

namespace forge {

namespace {

constexpr std::complex<double> kI{0.0, 1.0};

struct KindInfo {
  const char* name;
  bool two_qubit;
  bool has_angle;
};

KindInfo kind_info(GateKind kind) {
  switch (kind) {
    case GateKind::X: return {"X", false, false};
    case GateKind::Y: return {"Y", false, false};
    case GateKind::Z: return {"Z", false, false};
    case GateKind::H: return {"H", false, false};
    case GateKind::S: return {"S", false, false};
    case GateKind::Sdg: return {"SDG", false, false};
    case GateKind::RY: return {"RY", false, true};
    case GateKind::RZ: return {"RZ", false, true};
    case GateKind::CNOT: return {"CNOT", true, false};
    case GateKind::CZ: return {"CZ", true, false};
    case GateKind::SWAP: return {"SWAP", true, false};
    case GateKind::Hop: return {"HOP", true, true};
    case GateKind::ModHop: return {"MODHOP", true, true};
  }
  return {"?", false, false};
}

}  // namespace

const char* gate_kind_name(GateKind kind) { return kind_info(kind).name; }
bool gate_is_two_qubit(GateKind kind) { return kind_info(kind).two_qubit; }
bool gate_has_angle(GateKind kind) { return kind_info(kind).has_angle; }

Gate Gate::inverse() const {
  if (param >= 0) throw ContractError("cannot invert an unbound gate");
  Gate inv = *this;
  switch (kind) {
    case GateKind::S: inv.kind = GateKind::Sdg; break;
    case GateKind::Sdg: inv.kind = GateKind::S; break;
    case GateKind::RY:
    case GateKind::RZ:
    case GateKind::Hop:
    case GateKind::ModHop:
      inv.angle = -angle;
      break;
    default:
      break;  // self-inverse
  }
  return inv;
}

std::array<std::complex<double>, 4> gate_matrix_1q(const Gate& g) {
  if (g.is_two_qubit()) throw ContractError("gate is not single-qubit");
  if (g.param >= 0) throw ContractError("gate angle is unbound");
  switch (g.kind) {
    case GateKind::X: return {0, 1, 1, 0};
    case GateKind::Y: return {0, -kI, kI, 0};
    case GateKind::Z: return {1, 0, 0, -1};
    case GateKind::H: {
      double s = 1.0 / std::sqrt(2.0);
      return {s, s, s, -s};
    }
    case GateKind::S: return {1, 0, 0, kI};
    case GateKind::Sdg: return {1, 0, 0, -kI};
    case GateKind::RY: {
      double c = std::cos(g.angle / 2), s = std::sin(g.angle / 2);
      return {c, -s, s, c};
    }
    case GateKind::RZ: {
      std::complex<double> em = std::exp(-kI * (g.angle / 2));
      std::complex<double> ep = std::exp(kI * (g.angle / 2));
      return {em, 0, 0, ep};
    }
    default:
      throw ContractError("unexpected single-qubit kind");
  }
}

std::array<std::complex<double>, 16> gate_matrix_2q(const Gate& g) {
  if (!g.is_two_qubit()) throw ContractError("gate is not two-qubit");
  if (g.param >= 0) throw ContractError("gate angle is unbound");
  std::array<std::complex<double>, 16> m{};
  switch (g.kind) {
    case GateKind::CNOT:
      // q0 = control, q1 = target.
      m[0 * 4 + 0] = 1; m[1 * 4 + 1] = 1; m[2 * 4 + 3] = 1; m[3 * 4 + 2] = 1;
      break;
    case GateKind::CZ:
      m[0 * 4 + 0] = 1; m[1 * 4 + 1] = 1; m[2 * 4 + 2] = 1; m[3 * 4 + 3] = -1;
      break;
    case GateKind::SWAP:
      m[0 * 4 + 0] = 1; m[1 * 4 + 2] = 1; m[2 * 4 + 1] = 1; m[3 * 4 + 3] = 1;
      break;
    case GateKind::Hop:
    case GateKind::ModHop: {
      double c = std::cos(g.angle), s = std::sin(g.angle);
      m[0 * 4 + 0] = 1;
      m[1 * 4 + 1] = c; m[1 * 4 + 2] = -s;
      m[2 * 4 + 1] = s; m[2 * 4 + 2] = c;
      m[3 * 4 + 3] = (g.kind == GateKind::Hop) ? -1 : 1;
      break;
    }
    default:
      throw ContractError("unexpected two-qubit kind");
  }
  return m;
}

int Circuit::two_qubit_count() const {
  int count = 0;
  for (const Gate& g : gates) count += g.is_two_qubit();
  return count;
}

bool Circuit::has_unbound_params() const {
  for (const Gate& g : gates) {
    if (g.param >= 0) return true;
  }
  return false;
}

Circuit Circuit::bound(std::span<const double> values) const {
  if (values.size() != param_names.size()) {
    throw InputError("parameter count mismatch when binding circuit");
  }
  Circuit out = *this;
  out.param_names.clear();
  for (Gate& g : out.gates) {
    if (g.param >= 0) {
      if (g.param >= static_cast<int>(values.size())) {
        throw ContractError("gate references a missing parameter slot");
      }
      g.angle = values[static_cast<size_t>(g.param)];
      g.param = -1;
    }
  }
  return out;
}

Circuit Circuit::inverse() const {
  if (has_unbound_params()) throw ContractError("cannot invert an unbound circuit");
  Circuit inv;
  inv.n_qubits = n_qubits;
  inv.gates.reserve(gates.size());
  for (auto it = gates.rbegin(); it != gates.rend(); ++it) {
    inv.gates.push_back(it->inverse());
  }
  return inv;
}

Circuit Circuit::then(const Circuit& next) const {
  if (n_qubits != next.n_qubits) throw ContractError("circuit width mismatch");
  if (!param_names.empty() || !next.param_names.empty()) {
    throw ContractError("cannot concatenate parameterized circuits");
  }
  Circuit out = *this;
  out.gates.insert(out.gates.end(), next.gates.begin(), next.gates.end());
  return out;
}

bool Circuit::is_real(double tol) const {
  for (const Gate& g : gates) {
    if (g.param >= 0) throw ContractError("realness check needs a bound circuit");
    if (g.is_two_qubit()) {
      for (const auto& v : gate_matrix_2q(g)) {
        if (std::abs(v.imag()) > tol) return false;
      }
    } else {
      for (const auto& v : gate_matrix_1q(g)) {
        if (std::abs(v.imag()) > tol) return false;
      }
    }
  }
  return true;
}

Circuit Circuit::parse(std::string_view text, int n_qubits) {
  if (n_qubits <= 0) throw InputError("circuit register size must be positive");
  Circuit out;
  out.n_qubits = n_qubits;
  std::map<std::string, int> slots;

  std::istringstream stream{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(stream, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream fields(line);
    std::string kind_token;
    if (!(fields >> kind_token)) continue;  // blank line

    auto fail = [&](const std::string& why) -> InputError {
      return InputError("circuit line " + std::to_string(line_no) + ": " + why);
    };

    Gate g;
    bool known = false;
    for (GateKind kind : {GateKind::X, GateKind::Y, GateKind::Z, GateKind::H,
                          GateKind::S, GateKind::Sdg, GateKind::RY, GateKind::RZ,
                          GateKind::CNOT, GateKind::CZ, GateKind::SWAP,
                          GateKind::Hop, GateKind::ModHop}) {
      if (kind_token == gate_kind_name(kind)) {
        g.kind = kind;
        known = true;
        break;
      }
    }
    if (!known) throw fail("unknown gate '" + kind_token + "'");

    auto read_qubit = [&]() {
      int q_text;
      if (!(fields >> q_text)) throw fail("missing qubit index");
      if (q_text < 1 || q_text > n_qubits) {
        throw fail("qubit index " + std::to_string(q_text) + " out of range");
      }
      return q_text - 1;
    };
    g.q0 = read_qubit();
    if (g.is_two_qubit()) {
      g.q1 = read_qubit();
      if (g.q1 == g.q0) throw fail("two-qubit gate needs distinct qubits");
    }
    if (g.has_angle()) {
      std::string token;
      if (!(fields >> token)) throw fail("missing angle");
      if (!token.empty() && token.front() == '$') {
        std::string name = token.substr(1);
        if (name.empty()) throw fail("empty parameter name");
        auto [it, inserted] = slots.try_emplace(name, static_cast<int>(out.param_names.size()));
        if (inserted) out.param_names.push_back(name);
        g.param = it->second;
      } else {
        char* end = nullptr;
        g.angle = std::strtod(token.c_str(), &end);
        if (end == token.c_str() || *end != '\0') throw fail("bad angle '" + token + "'");
      }
    }
    std::string extra;
    if (fields >> extra) throw fail("trailing token '" + extra + "'");
    out.gates.push_back(g);
  }
  return out;
}

std::string Circuit::str() const {
  std::string out;
  for (const Gate& g : gates) {
    out += gate_kind_name(g.kind);
    out += ' ';
    out += std::to_string(g.q0 + 1);
    if (g.is_two_qubit()) {
      out += ' ';
      out += std::to_string(g.q1 + 1);
    }
    if (g.has_angle()) {
      out += ' ';
      if (g.param >= 0) {
        out += '$';
        out += param_names[static_cast<size_t>(g.param)];
      } else {
        out += format_double(g.angle);
      }
    }
    out += '\n';
  }
  return out;
}

Circuit fold_circuit(const Circuit& circuit, int factor) {
  if (factor < 1 || factor % 2 == 0) {
    throw InputError("fold factor must be odd and positive");
  }
  if (circuit.has_unbound_params()) {
    throw ContractError("cannot fold an unbound circuit");
  }
  Circuit out;
  out.n_qubits = circuit.n_qubits;
  out.gates.reserve(circuit.gates.size() * static_cast<size_t>(factor));
  for (const Gate& g : circuit.gates) {
    out.gates.push_back(g);
    for (int round = 0; round < (factor - 1) / 2; ++round) {
      out.gates.push_back(g.inverse());
      out.gates.push_back(g);
    }
  }
  return out;
}

bool check_line_layout(const Circuit& circuit,
                       std::span<const std::pair<int, int>> edges) {
  for (const Gate& g : circuit.gates) {
    if (!g.is_two_qubit()) continue;
    bool found = false;
    for (const auto& [a, b] : edges) {
      if ((a == g.q0 && b == g.q1) || (a == g.q1 && b == g.q0)) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

Circuit from_clifford(const CliffordCircuit& c) {
  Circuit out;
  out.n_qubits = c.n_qubits;
  out.gates.reserve(c.gates.size());
  for (const CliffordGate& g : c.gates) {
    Gate lifted;
    switch (g.kind) {
      case CliffordGateKind::H: lifted.kind = GateKind::H; break;
      case CliffordGateKind::S: lifted.kind = GateKind::S; break;
      case CliffordGateKind::Sdg: lifted.kind = GateKind::Sdg; break;
      case CliffordGateKind::X: lifted.kind = GateKind::X; break;
      case CliffordGateKind::Y: lifted.kind = GateKind::Y; break;
      case CliffordGateKind::Z: lifted.kind = GateKind::Z; break;
      case CliffordGateKind::CNOT: lifted.kind = GateKind::CNOT; break;
      case CliffordGateKind::CZ: lifted.kind = GateKind::CZ; break;
    }
    lifted.q0 = g.q0;
    lifted.q1 = g.q1;
    out.gates.push_back(lifted);
  }
  return out;
}

}  // namespace forge
