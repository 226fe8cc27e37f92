// Copyright 2026 The checkeval Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "checkeval/json_payload.hpp"

#include <optional>
#include <string>
#include <vector>

#include "checkeval/errors.hpp"
#include "checkeval/text.hpp"

namespace checkeval {
namespace {

using nlohmann::json;

std::optional<json> try_parse(std::string_view s) {
  auto j = json::parse(s.begin(), s.end(), nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) return std::nullopt;
  return j;
}

// Body of the first ``` fenced block, without the info string line.
std::optional<std::string_view> fenced_body(std::string_view text) {
  const auto open = text.find("```");
  if (open == std::string_view::npos) return std::nullopt;
  auto body_start = text.find('\n', open + 3);
  if (body_start == std::string_view::npos) return std::nullopt;
  ++body_start;
  const auto close = text.find("```", body_start);
  if (close == std::string_view::npos) return text.substr(body_start);
  return text.substr(body_start, close - body_start);
}

// End (exclusive) of the bracketed span opening at `open`, honouring strings.
std::optional<std::size_t> balanced_end(std::string_view s, std::size_t open) {
  std::vector<char> stack;
  bool in_string = false;
  bool escaped = false;
  for (std::size_t i = open; i < s.size(); ++i) {
    const char c = s[i];
    if (in_string) {
      if (escaped) {
        escaped = false;
      } else if (c == '\\') {
        escaped = true;
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    switch (c) {
      case '"': in_string = true; break;
      case '{': stack.push_back('}'); break;
      case '[': stack.push_back(']'); break;
      case '}':
      case ']':
        if (stack.empty() || stack.back() != c) return std::nullopt;
        stack.pop_back();
        if (stack.empty()) return i + 1;
        break;
      default: break;
    }
  }
  return std::nullopt;
}

std::optional<json> extract(std::string_view s) {
  const std::string trimmed = text::trim(s);
  if (auto whole = try_parse(trimmed)) return whole;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '{' && s[i] != '[') continue;
    if (auto end = balanced_end(s, i)) {
      if (auto j = try_parse(s.substr(i, *end - i))) return j;
    }
  }
  return std::nullopt;
}

}  // namespace

json parse_json_payload(std::string_view text) {
  if (auto body = fenced_body(text)) {
    if (auto j = extract(*body)) return *j;
  }
  if (auto j = extract(text)) return *j;
  throw ParseError("no parseable JSON value in model reply", std::string(text));
}

}  // namespace checkeval
