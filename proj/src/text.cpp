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

#include "forge/text.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace forge {

std::string format_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

double parse_double(const std::string& token, const std::string& context) {
  char* end = nullptr;
  const double value = std::strtod(token.c_str(), &end);
  if (end == token.c_str() || *end != '\0' || !std::isfinite(value)) {
    throw InputError(context + ": bad number '" + token + "'");
  }
  return value;
}

long parse_long(const std::string& token, const std::string& context) {
  char* end = nullptr;
  const long value = std::strtol(token.c_str(), &end, 10);
  if (end == token.c_str() || *end != '\0' || value < 0) {
    throw InputError(context + ": bad count '" + token + "'");
  }
  return value;
}

LineScanner::LineScanner(std::string_view text) {
  std::istringstream stream{std::string(text)};
  std::string line;
  while (std::getline(stream, line)) {
    lines_.push_back(line);
  }
}

bool LineScanner::next(std::vector<std::string>& tokens) {
  while (pos_ < lines_.size()) {
    std::string line = lines_[pos_];
    ++pos_;
    if (auto hash = line.find('#'); hash != std::string::npos) {
      line.resize(hash);
    }
    std::istringstream fields(line);
    tokens.clear();
    std::string token;
    while (fields >> token) {
      tokens.push_back(token);
    }
    if (!tokens.empty()) {
      line_number_ = static_cast<int>(pos_);
      return true;
    }
  }
  return false;
}

std::vector<std::string> LineScanner::require(const std::string& what) {
  std::vector<std::string> tokens;
  if (!next(tokens)) {
    throw InputError("unexpected end of input, expected " + what);
  }
  return tokens;
}

InputError LineScanner::error(const std::string& why) const {
  return InputError("line " + std::to_string(line_number_) + ": " + why);
}

}  // namespace forge
