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

#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include "checkeval/errors.hpp"
#include "checkeval/json_payload.hpp"
#include "checkeval/random.hpp"
#include "oracles.hpp"

namespace checkeval {
namespace {

using nlohmann::json;

TEST(JsonPayload, PlainObject) {
  EXPECT_EQ(parse_json_payload(R"({"1": "check flow"})"), json({{"1", "check flow"}}));
}

TEST(JsonPayload, FencedArray) {
  EXPECT_EQ(parse_json_payload("```json\n[\"a\",\"b\"]\n```"), json({"a", "b"}));
}

TEST(JsonPayload, EmbeddedInProse) {
  const std::string text = R"(Sure! Here it is: {"k": [1,2]} hope that helps)";
  const auto expected = json::parse(oracle::first_balanced(text));
  EXPECT_EQ(expected, json({{"k", {1, 2}}}));
  EXPECT_EQ(parse_json_payload(text), expected);
}

TEST(JsonPayload, BracesInsideStrings) {
  EXPECT_EQ(parse_json_payload(R"(note: {"a": "x}y", "b": "[z"} done)"),
            json({{"a", "x}y"}, {"b", "[z"}}));
}

TEST(JsonPayload, NoJsonCarriesRawText) {
  try {
    parse_json_payload("no structure here");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.raw_text(), "no structure here");
  }
}

// Random JSON values wrapped in prose must come back unchanged and agree with
// the balanced-scan oracle.
json random_value(Rng& rng, int depth) {
  const auto pick = rng.below(depth > 2 ? 3 : 5);
  switch (pick) {
    case 0: return static_cast<int>(rng.below(100));
    case 1: return std::string(1 + rng.below(4), static_cast<char>('a' + rng.below(26))) + "}";
    case 2: return rng.below(2) == 0;
    case 3: {
      json a = json::array();
      for (std::uint64_t i = 0, n = rng.below(4); i < n; ++i) a.push_back(random_value(rng, depth + 1));
      return a;
    }
    default: {
      json o = json::object();
      for (std::uint64_t i = 0, n = 1 + rng.below(3); i < n; ++i) {
        o[std::to_string(i)] = random_value(rng, depth + 1);
      }
      return o;
    }
  }
}

TEST(JsonPayload, RoundTripAgainstOracle) {
  Rng rng(42);
  const char* prefixes[] = {"", "Here you go: ", "Result:\n", "ok "};
  const char* suffixes[] = {"", " Thanks.", "\nLet me know.", " (done)"};
  for (int i = 0; i < 300; ++i) {
    json v = rng.below(2) ? json::object({{"x", random_value(rng, 1)}}) : json::array({random_value(rng, 1)});
    const std::string text = std::string(prefixes[rng.below(4)]) + v.dump() + suffixes[rng.below(4)];
    EXPECT_EQ(parse_json_payload(text), v) << text;
    EXPECT_EQ(json::parse(oracle::first_balanced(text)), v) << text;
  }
}

}  // namespace
}  // namespace checkeval
