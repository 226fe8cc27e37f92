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

#include <algorithm>
#include <filesystem>
#include <map>
#include <random>
#include <set>

#include "checkeval/dataset.hpp"
#include "checkeval/errors.hpp"
#include "oracles.hpp"

namespace checkeval {
namespace {

const std::filesystem::path kFixtures = CHECKEVAL_FIXTURE_DIR;

TEST(SummEvalLoader, AveragesExpertAnnotations) {
  const auto res = load_summeval(kFixtures / "summeval_two.jsonl");
  ASSERT_EQ(res.dataset.samples.size(), 2u);
  const auto& s = res.dataset.samples[0];
  EXPECT_EQ(s.id, "dm-0001/M11");
  EXPECT_EQ(s.group_key, "dm-0001");
  EXPECT_NEAR(s.ground_truth.at("Coherence"), 8.0 / 3.0, 1e-12);
  EXPECT_NEAR(s.ground_truth.at("Consistency"), 14.0 / 3.0, 1e-12);
  EXPECT_NE(s.candidate_text.find("Caf\xc3\xa9"), std::string::npos) << "text should be NFC";
  EXPECT_EQ(res.dataset.dimensions.size(), 4u);
}

TEST(SummEvalLoader, ParsesSyntheticBenchmark) {
  const auto res = load_summeval(kFixtures / "summeval_synthetic.jsonl");
  EXPECT_EQ(res.dataset.samples.size(), 160u);
  std::map<std::string, int> groups;
  for (const auto& s : res.dataset.samples) ++groups[s.group_key];
  EXPECT_EQ(groups.size(), 10u);
  for (const auto& [key, count] : groups) EXPECT_EQ(count, 16) << key;
}

TEST(SummEvalLoader, CollectsRecordErrors) {
  const auto res = load_summeval(kFixtures / "summeval_mixed.jsonl");
  std::vector<std::string> ids;
  for (const auto& s : res.dataset.samples) ids.push_back(s.id);
  EXPECT_EQ(ids, (std::vector<std::string>{"d1/A", "d2/A"}));
  EXPECT_EQ(res.report.parsed, 2u);
  EXPECT_EQ(res.report.skipped, 5u);
  std::set<std::size_t> lines;
  for (const auto& e : res.report.errors) lines.insert(e.line);
  EXPECT_EQ(lines, (std::set<std::size_t>{2, 3, 4, 5, 8}));  // line 7 is blank
  EXPECT_FALSE(res.dataset.samples[1].source_text.has_value());
}

TEST(SummEvalLoader, FailFastThrows) {
  EXPECT_THROW(load_summeval(kFixtures / "summeval_mixed.jsonl", LoadPolicy::FailFast), ParseError);
  EXPECT_THROW(load_summeval(kFixtures / "missing.jsonl"), IoError);
}

TEST(EllipseLoader, PassesScoresThrough) {
  const auto res = load_ellipse(kFixtures / "ellipse_sample.csv");
  EXPECT_EQ(res.dataset.samples.size(), 10u);
  EXPECT_EQ(res.dataset.dimensions.size(), 7u);
  const auto& first = res.dataset.samples[0];
  EXPECT_EQ(first.id, "E001");
  EXPECT_DOUBLE_EQ(first.ground_truth.at("Overall"), 3.0);
  EXPECT_DOUBLE_EQ(first.ground_truth.at("Grammar"), 2.5);
  EXPECT_FALSE(first.source_text.has_value());
  const auto six = std::find_if(res.dataset.samples.begin(), res.dataset.samples.end(),
                                [](const Sample& s) { return s.id == "E006"; });
  ASSERT_NE(six, res.dataset.samples.end());
  EXPECT_NE(six->candidate_text.find('\n'), std::string::npos);
  ASSERT_EQ(res.report.errors.size(), 2u);
  EXPECT_EQ(res.report.errors[0].id, "E009");
  EXPECT_EQ(res.report.errors[1].id, "E010");
  EXPECT_EQ(res.report.errors[0].line, 9u);
}

TEST(ScoreBin, HalfPointBins) {
  EXPECT_EQ(score_bin(1.0), 0u);
  EXPECT_EQ(score_bin(1.49), 0u);
  EXPECT_EQ(score_bin(1.5), 1u);
  EXPECT_EQ(score_bin(8.0 / 3.0), 3u);
  EXPECT_EQ(score_bin(4.5), 7u);
  EXPECT_EQ(score_bin(5.0), 7u);
}

TEST(LargestRemainder, MatchesOracle) {
  const std::vector<std::vector<std::size_t>> cases = {
      {25, 35, 40, 30, 30, 15, 15, 10}, {1, 1, 1}, {100}, {3, 3, 4}, {7, 0, 13, 0, 1}};
  for (const auto& counts : cases) {
    for (double f : {0.1, 0.25, 0.5}) {
      const auto expected = oracle::hamilton(counts, f);
      std::size_t total = 0;
      for (auto e : expected) total += e;
      const auto got = largest_remainder(counts, total);
      ASSERT_EQ(got.size(), counts.size());
      for (std::size_t i = 0; i < counts.size(); ++i) {
        const double exact = f * static_cast<double>(counts[i]);
        EXPECT_LE(std::abs(static_cast<double>(got[i]) - exact), 1.0);
      }
      std::size_t got_total = 0;
      for (auto g : got) got_total += g;
      EXPECT_EQ(got_total, total);
    }
  }
}

// 200 singleton samples. Coherence bins hold {25,35,40,30,30,15,15,10}
// samples, Fluency bins {10,30,30,50,30,20,20,10}, interleaved so the two
// dimensions are not aligned.
Dataset synthetic_200() {
  Dataset d;
  d.name = "synthetic";
  d.dimensions = {{"Coherence", "rubric", DimensionCategory::InternalQuality},
                  {"Fluency", "rubric", DimensionCategory::InternalQuality}};
  const std::vector<std::size_t> coh = {25, 35, 40, 30, 30, 15, 15, 10};
  const std::vector<std::size_t> flu = {10, 30, 30, 50, 30, 20, 20, 10};
  std::vector<double> coh_scores, flu_scores;
  for (std::size_t b = 0; b < 8; ++b) {
    for (std::size_t i = 0; i < coh[b]; ++i) coh_scores.push_back(1.0 + 0.5 * static_cast<double>(b));
    for (std::size_t i = 0; i < flu[b]; ++i) flu_scores.push_back(1.0 + 0.5 * static_cast<double>(b));
  }
  for (std::size_t i = 0; i < 200; ++i) {
    Sample s;
    s.id = "s" + std::to_string(1000 + i);
    s.candidate_text = "text " + std::to_string(i);
    s.ground_truth["Coherence"] = coh_scores[i];
    s.ground_truth["Fluency"] = flu_scores[(i * 7) % 200];
    d.samples.push_back(s);
  }
  return d;
}

std::set<std::string> ids_of(const Dataset& d) {
  std::set<std::string> out;
  for (const auto& s : d.samples) out.insert(s.id);
  return out;
}

TEST(StratifiedSample, BinCountsWithinOneOfTargets) {
  const auto data = synthetic_200();
  for (std::uint64_t seed : {0u, 7u, 12345u}) {
    const auto sub = stratified_sample(data, 0.1, seed);
    EXPECT_EQ(sub.samples.size(), 20u);
    for (const auto& dim : data.dimensions) {
      const auto full = histogram(data, dim.name);
      const auto got = histogram(sub, dim.name);
      const auto target = oracle::hamilton(std::vector<std::size_t>(full.begin(), full.end()), 0.1);
      for (std::size_t b = 0; b < kScoreBins; ++b) {
        EXPECT_LE(std::abs(static_cast<long>(got[b]) - static_cast<long>(target[b])), 1)
            << dim.name << " bin " << b << " seed " << seed;
      }
    }
  }
}

TEST(StratifiedSample, RandomDatasetsStayWithinOne) {
  std::mt19937 gen(42);
  std::uniform_int_distribution<int> bin(0, 8);
  int checked = 0;
  for (int trial = 0; trial < 40; ++trial) {
    Dataset d;
    d.dimensions = {{"A", "", DimensionCategory::InternalQuality},
                    {"B", "", DimensionCategory::InternalQuality},
                    {"C", "", DimensionCategory::InternalQuality}};
    for (int i = 0; i < 200; ++i) {
      Sample s;
      s.id = "r" + std::to_string(i);
      for (const char* dim : {"A", "B", "C"}) s.ground_truth[dim] = 1.0 + 0.5 * bin(gen);
      d.samples.push_back(s);
    }
    const auto sub = stratified_sample(d, 0.1, static_cast<std::uint64_t>(trial));
    ASSERT_EQ(sub.samples.size(), 20u);
    for (const auto& dim : d.dimensions) {
      const auto full = histogram(d, dim.name);
      const auto got = histogram(sub, dim.name);
      const auto target = oracle::hamilton(std::vector<std::size_t>(full.begin(), full.end()), 0.1);
      for (std::size_t b = 0; b < kScoreBins; ++b) {
        EXPECT_LE(std::abs(static_cast<long>(got[b]) - static_cast<long>(target[b])), 1)
            << "trial " << trial << " " << dim.name << " bin " << b;
        ++checked;
      }
    }
  }
  EXPECT_EQ(checked, 40 * 3 * static_cast<int>(kScoreBins));
}

TEST(StratifiedSample, KnownTargets) {
  // Coherence bins 2 and 3 hold 40 and 30 samples, so 4 and 3 exactly.
  const auto full = histogram(synthetic_200(), "Coherence");
  const auto target = oracle::hamilton(std::vector<std::size_t>(full.begin(), full.end()), 0.1);
  EXPECT_EQ(target[2], 4u);
  EXPECT_EQ(target[3], 3u);
  EXPECT_EQ(target[7], 1u);
}

TEST(StratifiedSample, SameSeedSameIds) {
  const auto data = synthetic_200();
  EXPECT_EQ(ids_of(stratified_sample(data, 0.1, 7)), ids_of(stratified_sample(data, 0.1, 7)));
  EXPECT_NE(ids_of(stratified_sample(data, 0.1, 7)), ids_of(stratified_sample(data, 0.1, 8)));
}

TEST(StratifiedSample, FullFractionIsIdentity) {
  const auto data = synthetic_200();
  EXPECT_EQ(stratified_sample(data, 1.0, 3).samples, data.samples);
}

TEST(StratifiedSample, PreservesInputOrder) {
  const auto data = synthetic_200();
  const auto sub = stratified_sample(data, 0.1, 5);
  EXPECT_TRUE(std::is_sorted(sub.samples.begin(), sub.samples.end(),
                             [](const Sample& a, const Sample& b) { return a.id < b.id; }));
}

TEST(StratifiedSample, RejectsBadFraction) {
  const auto data = synthetic_200();
  EXPECT_THROW(stratified_sample(data, 0.0, 1), InvalidArgument);
  EXPECT_THROW(stratified_sample(data, 1.5, 1), InvalidArgument);
}

TEST(StratifiedSample, KeepsSummEvalGroupsWhole) {
  const auto data = load_summeval(kFixtures / "summeval_synthetic.jsonl").dataset;
  for (double f : {0.1, 0.3, 0.4}) {
    const auto sub = stratified_sample(data, f, 11);
    std::map<std::string, int> groups;
    for (const auto& s : sub.samples) ++groups[s.group_key];
    EXPECT_FALSE(groups.empty());
    for (const auto& [key, count] : groups) EXPECT_EQ(count, 16) << key;
  }
}

}  // namespace
}  // namespace checkeval
