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

#ifndef FORGE_TEXT_HPP
#define FORGE_TEXT_HPP

#include <string>
#include <string_view>
#include <vector>

#include "forge/errors.hpp"

namespace forge {

// Shortest round-trip decimal form used by every text format ("%.17g").
std::string format_double(double value);

// Strict double parse; `context` names the field in the error message.
double parse_double(const std::string& token, const std::string& context);

// Strict non-negative integer parse.
long parse_long(const std::string& token, const std::string& context);

// Walks the non-blank lines of a text block, stripping '#' comments and
// splitting on whitespace.  Line numbers are 1-based over the raw input.
class LineScanner {
 public:
  explicit LineScanner(std::string_view text);

  // Advances to the next non-blank line; false once the input is exhausted.
  bool next(std::vector<std::string>& tokens);
  // Like next(), but throws InputError mentioning `what` at end of input.
  std::vector<std::string> require(const std::string& what);
  int line_number() const { return line_number_; }

  // InputError annotated with the current line number.
  InputError error(const std::string& why) const;

 private:
  std::vector<std::string> lines_;
  size_t pos_ = 0;
  int line_number_ = 0;
};

}  // namespace forge

#endif  // FORGE_TEXT_HPP
