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
#include <set>

#include <nlohmann/json.hpp>

#include "checkeval/dataset.hpp"
#include "checkeval/errors.hpp"
#include "checkeval/prompt.hpp"
#include "checkeval/ta_collect.hpp"

namespace checkeval {
namespace {

using nlohmann::json;
const std::filesystem::path kFixtures = CHECKEVAL_FIXTURE_DIR;

Dimension coherence() {
  for (const auto& d : summeval_dimensions()) {
    if (d.name == "Coherence") return d;
  }
  throw std::logic_error("no Coherence");
}

std::vector<Exemplar> four_exemplars() {
  return {{"Article one.", "Summary one.", 1.0},
          {"Article two.", "Summary two.", 2.3333333},
          {"Article three.", "Summary three.", 3.5},
          {"Article four.", "Summary four.", 5.0}};
}

std::size_t count(const std::string& hay, const std::string& needle) {
  std::size_t n = 0;
  for (auto p = hay.find(needle); p != std::string::npos; p = hay.find(needle, p + 1)) ++n;
  return n;
}

TEST(TaPrompt, SystemMessageNamesDimension) {
  const auto ex = four_exemplars();
  const auto req = build_ta_prompt(coherence(), ex, PromptSet::builtin("news-summary"));
  EXPECT_TRUE(req.system_message.starts_with(
      "You are an assessor who rates Coherence of the summary of a news article."));
}

TEST(TaPrompt, UserMessageHoldsFourSamples) {
  const auto ex = four_exemplars();
  const auto req = build_ta_prompt(coherence(), ex, PromptSet::builtin("news-summary"));
  EXPECT_EQ(count(req.user_message, "News Article:"), 4u);
  EXPECT_EQ(count(req.user_message, "<End of Sample"), 4u);
  EXPECT_NE(req.user_message.find("Score: 2.33\n"), std::string::npos);
  EXPECT_NE(req.user_message.find("Score: 5\n"), std::string::npos);
  EXPECT_TRUE(req.user_message.ends_with(
      R"(For example, {1: "consideration 1", 2: "consideration 2", 3: "consideration 3", 4: "consideration 4", 5: "consideration 5", ...})"));
}

TEST(TaPrompt, ByteIdenticalForSameInputs) {
  const auto ex = four_exemplars();
  const auto prompts = PromptSet::builtin("news-summary");
  EXPECT_EQ(build_ta_prompt(coherence(), ex, prompts), build_ta_prompt(coherence(), ex, prompts));
}

TEST(TaPrompt, NeedsExactlyFourExemplars) {
  auto ex = four_exemplars();
  ex.pop_back();
  EXPECT_THROW(build_ta_prompt(coherence(), ex, PromptSet::builtin("news-summary")), InvalidArgument);
}

TEST(TaPrompt, EssaysHaveNoSourceBlock) {
  const auto dim = ellipse_dimensions().front();
  std::vector<Exemplar> ex = {{std::nullopt, "Essay a.", 1.5}, {std::nullopt, "Essay b.", 2.5},
                              {std::nullopt, "Essay c.", 3.5}, {std::nullopt, "Essay d.", 4.5}};
  const auto req = build_ta_prompt(dim, ex, PromptSet::builtin("essay"));
  EXPECT_EQ(count(req.user_message, "News Article:"), 0u);
  EXPECT_EQ(count(req.user_message, "Essay d."), 1u);
}

TEST(Exemplars, OnePerQuartileBand) {
  const auto data = load_summeval(kFixtures / "summeval_synthetic.jsonl").dataset;
  const auto dim = coherence();
  const auto ex = select_exemplars(data, dim, 3);
  ASSERT_EQ(ex.size(), 4u);
  for (std::size_t i = 1; i < ex.size(); ++i) EXPECT_LE(ex[i - 1].score, ex[i].score);
  EXPECT_EQ(select_exemplars(data, dim, 3).front().candidate_text, ex.front().candidate_text);
}

TEST(Exemplars, SkipsExcludedIds) {
  const auto data = load_summeval(kFixtures / "summeval_synthetic.jsonl").dataset;
  std::vector<std::string> half;
  for (std::size_t i = 0; i < data.samples.size(); i += 2) half.push_back(data.samples[i].id);
  const std::set<std::string> excluded_texts = [&] {
    std::set<std::string> t;
    for (std::size_t i = 0; i < data.samples.size(); i += 2) t.insert(data.samples[i].candidate_text);
    return t;
  }();
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    for (const auto& e : select_exemplars(data, coherence(), seed, half)) {
      EXPECT_FALSE(excluded_texts.contains(e.candidate_text));
    }
  }
}

TEST(Considerations, ObjectInNumericKeyOrder) {
  EXPECT_EQ(considerations_from_payload(json{{"10", "c"}, {"2", "b"}, {"1", "a"}}),
            (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_EQ(considerations_from_payload(json{"x", " ", "y"}), (std::vector<std::string>{"x", "y"}));
  EXPECT_THROW(considerations_from_payload(json{{"1", 5}}), ParseError);
  EXPECT_THROW(considerations_from_payload(json::object()), ParseError);
  EXPECT_THROW(considerations_from_payload(json("text")), ParseError);
}

class TwoModelBackend final : public ChatBackend {
 public:
  ChatResponse complete(const ChatRequest& r) override {
    if (r.model_id == "broken") return {"I refuse.", r.model_id, false};
    if (r.model_id == "chatty") return {R"(Sure, here: {"1": "x"} enjoy)", r.model_id, false};
    return {R"({"1": ")" + r.model_id + R"( a", "2": ")" + r.model_id + R"( b", "3": "c"})", r.model_id, false};
  }
  EmbeddingVector embed(std::string_view, std::string_view m) override { return {{1.0}, std::string(m)}; }
};

TEST(CollectLlm, ConcatenatesInModelOrder) {
  Gateway gw(std::make_shared<TwoModelBackend>());
  const std::vector<std::string> models = {"m1", "m2"};
  const auto ex = four_exemplars();
  const auto res = collect_llm_attributes(gw, models, coherence(), ex, PromptSet::builtin("news-summary"));
  ASSERT_EQ(res.attributes.size(), 6u);
  EXPECT_TRUE(res.errors.empty());
  EXPECT_EQ(res.attributes[0].text, "m1 a");
  EXPECT_EQ(res.attributes[3].text, "m2 a");
  EXPECT_EQ(res.attributes[0].source.participant_id, "m1");
  EXPECT_EQ(res.attributes[5].source.participant_id, "m2");
  EXPECT_EQ(res.attributes[0].source.kind, SourceKind::Llm);
  EXPECT_EQ(res.attributes[0].dimension, "Coherence");
}

TEST(CollectLlm, ProseWrappedReplyAndPerModelErrors) {
  Gateway gw(std::make_shared<TwoModelBackend>());
  const std::vector<std::string> models = {"chatty", "broken"};
  const auto ex = four_exemplars();
  const auto res = collect_llm_attributes(gw, models, coherence(), ex, PromptSet::builtin("news-summary"));
  ASSERT_EQ(res.attributes.size(), 1u);
  EXPECT_EQ(res.attributes[0].text, "x");
  ASSERT_EQ(res.errors.size(), 1u);
  EXPECT_EQ(res.errors[0].model_id, "broken");
  EXPECT_EQ(res.errors[0].raw_text, "I refuse.");
}

TEST(HumanAttributes, GroupsByParticipantAndDimension) {
  const auto res = ingest_human_attributes(kFixtures / "human_attributes.jsonl", summeval_dimensions());
  EXPECT_TRUE(res.errors.empty());
  std::size_t expert1_coherence = 0;
  for (const auto& a : res.attributes) {
    EXPECT_EQ(a.source.kind, SourceKind::Human);
    if (a.source.participant_id == "expert-1" && a.dimension == "Coherence") ++expert1_coherence;
  }
  EXPECT_EQ(expert1_coherence, 4u);
  EXPECT_EQ(res.attributes.size(), 32u);
}

TEST(HumanAttributes, RecordErrors) {
  const auto res = ingest_human_attributes(kFixtures / "human_attributes_mixed.jsonl", summeval_dimensions());
  ASSERT_EQ(res.attributes.size(), 2u);
  EXPECT_EQ(res.attributes[1].dimension, "Relevance");
  std::vector<std::size_t> lines;
  for (const auto& e : res.errors) lines.push_back(e.line);
  EXPECT_EQ(lines, (std::vector<std::size_t>{2, 3, 5}));
}

Attribute attr(std::string text, SourceKind kind, std::string who) {
  return {std::move(text), "Coherence", {kind, std::move(who)}, {}};
}

struct Pools {
  std::vector<Attribute> human, llm;
};

Pools pools(std::size_t humans, std::size_t llms) {
  Pools p;
  for (std::size_t i = 0; i < humans; ++i) {
    p.human.push_back(attr("h" + std::to_string(i), SourceKind::Human, i % 2 ? "expert-2" : "expert-1"));
  }
  for (std::size_t i = 0; i < llms; ++i) {
    p.llm.push_back(attr("l" + std::to_string(i), SourceKind::Llm, i % 3 ? "claude" : "gpt-4"));
  }
  return p;
}

TEST(AssembleCondition, CombIsUnionOfPools) {
  const auto p = pools(15, 12);
  const auto comb = assemble_condition(ConditionId::combination(), p.human, p.llm);
  EXPECT_EQ(comb.size(), 27u);
  for (const auto& a : comb) EXPECT_EQ(a.condition_tags, (std::vector<ConditionId>{ConditionId::combination()}));
}

TEST(AssembleCondition, SingleParticipantFilters) {
  const auto p = pools(6, 6);
  const auto sl = assemble_condition(ConditionId::single_llm("gpt-4"), p.human, p.llm);
  EXPECT_EQ(sl.size(), 2u);
  for (const auto& a : sl) EXPECT_EQ(a.source.participant_id, "gpt-4");
  EXPECT_EQ(assemble_condition(ConditionId::multiple_humans(), p.human, p.llm).size(), 6u);
  EXPECT_EQ(assemble_condition(ConditionId::multiple_llms(), p.human, p.llm).size(), 6u);
  EXPECT_THROW(assemble_condition(ConditionId::single_human("expert-9"), p.human, p.llm), InvalidArgument);
}

TEST(Deduplicate, MergesTagsOfEqualTexts) {
  auto a = attr("check flow", SourceKind::Human, "expert-1");
  a.add_condition(ConditionId::multiple_humans());
  auto b = a;
  b.condition_tags = {ConditionId::combination()};
  auto c = attr("other", SourceKind::Human, "expert-1");
  const auto out = deduplicate({a, b, c});
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0].condition_tags.size(), 2u);
}

}  // namespace
}  // namespace checkeval
