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

#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "checkeval/config.hpp"
#include "checkeval/errors.hpp"
#include "checkeval/pipeline.hpp"

namespace checkeval {
namespace {

namespace fs = std::filesystem;
const fs::path kFixtures = CHECKEVAL_FIXTURE_DIR;

fs::path write_config(const std::string& name, const std::string& body) {
  const auto dir = fs::temp_directory_path() / "checkeval_config_test";
  fs::create_directories(dir);
  const auto p = dir / name;
  std::ofstream(p) << body;
  return p;
}

const char* kMinimal = R"(
[dataset]
kind = "summeval"
path = "data.jsonl"

[ta]
llm_model_ids = ["gpt-4"]
conditions = ["SL:gpt-4"]
)";

TEST(Config, LoadsE2eFixture) {
  const auto c = load_config(kFixtures / "e2e" / "config.toml");
  EXPECT_EQ(c.seed, 11u);
  EXPECT_DOUBLE_EQ(c.sample_fraction, 0.4);
  EXPECT_EQ(c.ta.conditions.size(), 5u);
  EXPECT_EQ(c.analysis.fisher_pairs.size(), 4u);
  EXPECT_EQ(c.effective_prompt_set(), "news-summary");
  EXPECT_EQ(c.resolved_dimensions().size(), 4u);
  EXPECT_TRUE(validate_config(c).empty());
  EXPECT_EQ(c.resolve("x.jsonl"), (kFixtures / "e2e" / "x.jsonl").lexically_normal());
}

TEST(Config, DefaultsApply) {
  const auto c = load_config(write_config("minimal.toml", kMinimal));
  EXPECT_DOUBLE_EQ(c.sample_fraction, 0.1);
  EXPECT_EQ(c.construction.max_components, 5);
  EXPECT_EQ(c.analysis.lda_k, 5);
  EXPECT_EQ(c.gateway.backend, BackendKind::Mock);
  EXPECT_DOUBLE_EQ(c.evaluation.max_failure_fraction, 0.05);
}

TEST(Config, JsonAndTomlAgree) {
  const auto toml = load_config(kFixtures / "e2e" / "config.toml");
  const auto json_path = write_config("same.json", config_to_json(toml).dump());
  auto from_json = load_config(json_path);
  EXPECT_EQ(config_to_json(from_json), config_to_json(toml));
  EXPECT_EQ(config_hash(from_json), config_hash(toml));
  EXPECT_EQ(config_hash(toml).size(), 12u);
}

TEST(Config, RejectsUnknownKeysAndTypes) {
  EXPECT_THROW(load_config(write_config("unknown.toml", std::string(kMinimal) + "bogus = 1\n")), ConfigError);
  EXPECT_THROW(load_config(write_config("type.toml", std::string("seed = \"x\"\n") + kMinimal)), ConfigError);
  EXPECT_THROW(load_config(write_config("syntax.toml", "[dataset\n")), ConfigError);
  EXPECT_THROW(load_config(write_config("nodata.toml", "seed = 1\n")), ConfigError);
  EXPECT_THROW(load_config(write_config("cond.toml", std::string(kMinimal) + "[construction]\nmodel_id = 3\n")),
               ConfigError);
  EXPECT_THROW(load_config(fs::temp_directory_path() / "no_such_config.toml"), ConfigError);
}

TEST(Config, ValidationProblems) {
  auto c = load_config(write_config("missing_data.toml", kMinimal));
  const auto problems = validate_config(c);
  ASSERT_FALSE(problems.empty());
  EXPECT_NE(problems[0].find("does not exist"), std::string::npos);

  c = load_config(kFixtures / "e2e" / "config.toml");
  c.sample_fraction = 0.0;
  c.ta.conditions.push_back(ConditionId::combination());
  EXPECT_EQ(validate_config(c).size(), 2u);
}

TEST(Config, HashIgnoresLocation) {
  const auto a = load_config(kFixtures / "e2e" / "config.toml");
  auto b = a;
  b.base_dir = "/elsewhere";
  EXPECT_EQ(config_hash(a), config_hash(b));
  b.seed = 12;
  EXPECT_NE(config_hash(a), config_hash(b));
}

}  // namespace
}  // namespace checkeval
