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

#include <nlohmann/json.hpp>

#include "checkeval/checklist_builder.hpp"
#include "checkeval/errors.hpp"
#include "checkeval/json_io.hpp"
#include "checklist_fixture.hpp"
#include "stage_backend.hpp"

namespace checkeval {
namespace {

using nlohmann::json;
using testing::ChecklistFixture;
using testing::StageBackend;

const std::filesystem::path kChecklists = std::filesystem::path(CHECKEVAL_FIXTURE_DIR) / "checklists";

struct Harness {
  PromptSet prompts = PromptSet::builtin("news-summary");
  std::shared_ptr<StageBackend> backend = std::make_shared<StageBackend>(prompts);
  Gateway gateway{backend};
  ConstructionTrace trace;

  ChecklistBuilder builder(int max_components = 5) const {
    BuilderOptions o;
    o.max_components = max_components;
    return ChecklistBuilder(gateway, prompts, o);
  }
};

Dimension coherence() { return summeval_dimensions().front(); }

std::vector<Attribute> attrs(std::initializer_list<const char*> texts) {
  std::vector<Attribute> out;
  for (const char* t : texts) out.push_back({t, "Coherence", {SourceKind::Human, "expert-1"}, {}});
  return out;
}

std::vector<Component> components(std::initializer_list<const char*> labels) {
  std::vector<Component> out;
  for (const char* l : labels) out.push_back({l, "Coherence", {}});
  return out;
}

TEST(Extract, ParsesLabels) {
  Harness h;
  h.backend->on(BuildStage::Extract, R"(["Logical Flow","Structure"])");
  const auto a = attrs({"x"});
  const auto got = h.builder().extract_components(a, coherence(), h.trace);
  ASSERT_EQ(got.size(), 2u);
  EXPECT_EQ(got[1].label, "Structure");
}

TEST(Extract, TrimsToMaxComponentsWithWarning) {
  Harness h;
  h.backend->on(BuildStage::Extract, R"(["a","b","c","d","e","f","g"])");
  const auto a = attrs({"x"});
  EXPECT_EQ(h.builder(5).extract_components(a, coherence(), h.trace).size(), 5u);
  ASSERT_EQ(h.trace.warnings.size(), 1u);
}

TEST(Extract, EmptyListAndNonListFail) {
  Harness h;
  const auto a = attrs({"x"});
  h.backend->on(BuildStage::Extract, "[]");
  EXPECT_THROW(h.builder().extract_components(a, coherence(), h.trace), ConstructionError);
  h.backend->on(BuildStage::Extract, R"({"a": 1})");
  EXPECT_THROW(h.builder().extract_components(a, coherence(), h.trace), ParseError);
}

TEST(Extract, SentMaxComponentsInPrompt) {
  Harness h;
  std::string system;
  h.backend->on(BuildStage::Extract, StageBackend::Reply([&](const ChatRequest& r) {
    system = r.system_message;
    return std::string(R"(["a"])");
  }));
  const auto a = attrs({"x"});
  h.builder(7).extract_components(a, coherence(), h.trace);
  EXPECT_NE(system.find('7'), std::string::npos);
}

TEST(Cluster, MapsAttributesByExactMatch) {
  Harness h;
  h.backend->on(BuildStage::Cluster,
                R"({"Logical Flow": ["check flow", "check order"], "Structure": []})");
  const auto a = attrs({"check flow", "check order"});
  const auto got = h.builder().cluster_attributes(components({"Logical Flow", "Structure"}), a, h.trace);
  EXPECT_EQ(got[0].attributes.size(), 2u);
  EXPECT_EQ(got[1].attributes.size(), 0u);
}

TEST(Cluster, OmittedAttributeIsDropped) {
  Harness h;
  h.backend->on(BuildStage::Cluster, R"({"Logical Flow": ["check flow"]})");
  const auto a = attrs({"check flow", "repeated idea"});
  const auto got = h.builder().cluster_attributes(components({"Logical Flow"}), a, h.trace);
  ASSERT_EQ(got[0].attributes.size(), 1u);
  EXPECT_EQ(got[0].attributes[0].text, "check flow");
}

TEST(Cluster, ParaphraseAndUnknownLabelsWarn) {
  Harness h;
  h.backend->on(BuildStage::Cluster,
                R"({"Logical Flow": ["check flow", "checks the flow"], "Style": ["check flow"]})");
  const auto a = attrs({"check flow"});
  const auto got = h.builder().cluster_attributes(components({"Logical Flow"}), a, h.trace);
  EXPECT_EQ(got[0].attributes.size(), 1u);
  EXPECT_EQ(h.trace.warnings.size(), 2u);
}

TEST(Cluster, NothingMatchedFails) {
  Harness h;
  h.backend->on(BuildStage::Cluster, R"({"Logical Flow": ["invented"]})");
  const auto a = attrs({"check flow"});
  EXPECT_THROW(h.builder().cluster_attributes(components({"Logical Flow"}), a, h.trace), ConstructionError);
}

TEST(KeyQuestions, OnePerComponent) {
  Harness h;
  h.backend->on(BuildStage::KeyQuestions, R"({"A": "Is A?", "B": "Is B?", "C": "Is C?"})");
  const auto c = components({"A", "B", "C"});
  const auto got = h.builder().generate_key_questions(c, coherence(), h.trace);
  ASSERT_EQ(got.size(), 3u);
  EXPECT_EQ(got[2].question, "Is C?");
}

TEST(KeyQuestions, ForbiddenKeyAndMissingComponent) {
  Harness h;
  const auto c = components({"A"});
  h.backend->on(BuildStage::KeyQuestions, R"({"component 1": "Is A?"})");
  EXPECT_THROW(h.builder().generate_key_questions(c, coherence(), h.trace), ConstructionError);
  h.backend->on(BuildStage::KeyQuestions, R"({"B": "Is B?"})");
  EXPECT_THROW(h.builder().generate_key_questions(c, coherence(), h.trace), ConstructionError);
  EXPECT_THROW(h.builder().generate_key_questions({}, coherence(), h.trace), InvalidArgument);
}

TEST(SubQuestions, FlattenedCount) {
  Harness h;
  h.backend->on(BuildStage::SubQuestions, R"({"A": ["a1","a2","a3"], "B": ["b1","b2","b3"]})");
  const std::vector<KeyQuestion> k = {{"A", "Is A?"}, {"B", "Is B?"}};
  const auto got = h.builder().generate_sub_questions(k, coherence(), h.trace);
  std::size_t total = 0;
  for (const auto& g : got) total += g.questions.size();
  EXPECT_EQ(total, 6u);
}

TEST(SubQuestions, EmptyListFails) {
  Harness h;
  h.backend->on(BuildStage::SubQuestions, R"({"A": ["a1"], "B": []})");
  const std::vector<KeyQuestion> k = {{"A", "Is A?"}, {"B", "Is B?"}};
  EXPECT_THROW(h.builder().generate_sub_questions(k, coherence(), h.trace), ConstructionError);
}

TEST(Validate, MergeIdentityAndFormat) {
  Harness h;
  std::vector<std::string> in;
  for (int i = 0; i < 11; ++i) in.push_back("q" + std::to_string(i));
  json merged = json(std::vector<std::string>(in.begin() + 1, in.end()));
  merged[0] = "q0 and q1";
  h.backend->on(BuildStage::Validate, merged.dump());
  EXPECT_EQ(h.builder().validate_questions(in, coherence(), h.trace).size(), 10u);

  std::vector<std::string> five(in.begin(), in.begin() + 5);
  h.backend->on(BuildStage::Validate, json(five).dump());
  EXPECT_EQ(h.builder().validate_questions(five, coherence(), h.trace), five);

  h.backend->on(BuildStage::Validate, R"({"q": "x"})");
  EXPECT_THROW(h.builder().validate_questions(five, coherence(), h.trace), ParseError);
}

TEST(Build, MinimalPipelineAndMergedLabel) {
  Harness h;
  h.backend->on(BuildStage::Extract, R"(["Flow"])");
  h.backend->on(BuildStage::Cluster, R"({"Flow": ["check flow"]})");
  h.backend->on(BuildStage::KeyQuestions, R"({"Flow": "Does it flow?"})");
  h.backend->on(BuildStage::SubQuestions, R"({"Flow": ["Does it flow well?"]})");
  h.backend->on(BuildStage::Validate, R"(["Does it flow well?"])");
  const auto a = attrs({"check flow"});
  const auto r = h.builder().build(a, coherence(), "SH:expert-1");
  ASSERT_EQ(r.checklist.questions.size(), 1u);
  EXPECT_EQ(r.checklist.questions[0].component_label, "Flow");
  EXPECT_EQ(r.checklist.provenance.condition, "SH:expert-1");
  EXPECT_EQ(r.checklist.provenance.validated_by, "gpt-4");
  EXPECT_EQ(r.checklist.provenance.run_id.size(), 16u);

  h.backend->on(BuildStage::Validate, R"(["Does it flow, overall?"])");
  EXPECT_EQ(h.builder().build(a, coherence(), "SH:expert-1").checklist.questions[0].component_label,
            kMergedLabel);
}

TEST(Build, StageOrderIsFixed) {
  Harness h;
  const auto f = ChecklistFixture::load(kChecklists / "coherence.json");
  auto backend = f.backend(h.prompts);
  Gateway gw(backend);
  const auto r = ChecklistBuilder(gw, h.prompts, {}).build(f.attributes, f.dimension, "Comb");
  const std::vector<BuildStage> order = {BuildStage::Extract, BuildStage::Cluster, BuildStage::KeyQuestions,
                                         BuildStage::SubQuestions, BuildStage::Validate};
  EXPECT_EQ(backend->seen(), order);
  ASSERT_EQ(r.trace.raw_responses.size(), 5u);
  for (std::size_t i = 0; i < order.size(); ++i) EXPECT_EQ(r.trace.raw_responses[i].stage, order[i]);
}

TEST(Build, FailureCarriesTrace) {
  Harness h;
  h.backend->on(BuildStage::Extract, R"(["Flow"])");
  h.backend->on(BuildStage::Cluster, R"({"Flow": ["check flow"]})");
  h.backend->on(BuildStage::KeyQuestions, R"({"component": "Does it flow?"})");
  const auto a = attrs({"check flow"});
  try {
    h.builder().build(a, coherence(), "Comb");
    FAIL() << "expected ChecklistBuildFailure";
  } catch (const ChecklistBuildFailure& e) {
    EXPECT_EQ(e.trace().raw_responses.size(), 3u);
    EXPECT_EQ(e.trace().components.size(), 1u);
  }
}

class ReferenceChecklist : public ::testing::TestWithParam<std::pair<const char*, std::size_t>> {};

TEST_P(ReferenceChecklist, ReproducedVerbatim) {
  const auto [file, count] = GetParam();
  const auto prompts = PromptSet::builtin("news-summary");
  const auto f = ChecklistFixture::load(kChecklists / file);
  Gateway gw(f.backend(prompts));
  const ChecklistBuilder builder(gw, prompts, {});
  const auto first = builder.build(f.attributes, f.dimension, "Comb");
  EXPECT_EQ(first.checklist.questions.size(), count);
  EXPECT_EQ(testing::question_texts(first.checklist), f.expected_questions());
  for (const auto& q : first.checklist.questions) EXPECT_NE(q.component_label, kMergedLabel) << q.text;

  const auto second = builder.build(f.attributes, f.dimension, "Comb");
  EXPECT_EQ(json(first.checklist).dump(), json(second.checklist).dump());
  EXPECT_EQ(trace_to_json(first.trace).dump(), trace_to_json(second.trace).dump());
}

INSTANTIATE_TEST_SUITE_P(Dimensions, ReferenceChecklist,
                         ::testing::Values(std::make_pair("coherence.json", std::size_t{9}),
                                           std::make_pair("consistency.json", std::size_t{7}),
                                           std::make_pair("relevance.json", std::size_t{11})));

TEST(Build, ComponentCapAcrossSweep) {
  const auto prompts = PromptSet::builtin("news-summary");
  auto backend = std::make_shared<StageBackend>(prompts);
  json labels = json::array(), cluster = json::object(), keyq = json::object(), subq = json::object();
  for (int i = 1; i <= 9; ++i) {
    const std::string l = "Aspect " + std::string(1, static_cast<char>('A' + i - 1));
    labels.push_back(l);
    cluster[l] = json::array({"attribute " + std::to_string(i)});
    keyq[l] = "Is " + l + " fine?";
    subq[l] = json::array({"Is " + l + " really fine?"});
  }
  backend->on(BuildStage::Extract, labels.dump());
  backend->on(BuildStage::Cluster, cluster.dump());
  backend->on(BuildStage::KeyQuestions, keyq.dump());
  backend->on(BuildStage::SubQuestions, subq.dump());
  backend->on(BuildStage::Validate, StageBackend::Reply([](const ChatRequest& r) {
    const auto pos = r.user_message.find("# Sub-questions\n") + 16;
    return r.user_message.substr(pos, r.user_message.find('\n', pos) - pos);
  }));
  std::vector<Attribute> a;
  for (int i = 1; i <= 9; ++i) a.push_back({"attribute " + std::to_string(i), "Coherence", {SourceKind::Human, "e"}, {}});
  Gateway gw(backend);
  for (int m = 3; m <= 9; ++m) {
    BuilderOptions o;
    o.max_components = m;
    const auto r = ChecklistBuilder(gw, prompts, o).build(a, coherence(), "Comb");
    EXPECT_EQ(r.trace.components.size(), static_cast<std::size_t>(m));
    EXPECT_EQ(r.checklist.questions.size(), static_cast<std::size_t>(m));
  }
  const auto r = ChecklistBuilder(gw, prompts, {}).build(a, coherence(), "Comb");
  EXPECT_LE(r.trace.components.size(), 5u);
  BuilderOptions bad;
  bad.max_components = 10;
  EXPECT_THROW(ChecklistBuilder(gw, prompts, bad), InvalidArgument);
}

}  // namespace
}  // namespace checkeval
