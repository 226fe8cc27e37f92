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

#include <cmath>
#include <numeric>

#include "checkeval/analysis/lda.hpp"
#include "checkeval/errors.hpp"

namespace checkeval::analysis {
namespace {

using Doc = std::vector<std::string>;

std::vector<Doc> corpus() {
  const std::vector<Doc> themes = {{"flow", "order", "sequence", "transition"},
                                   {"grammar", "spelling", "typo", "tense"},
                                   {"fact", "source", "claim", "accurate"},
                                   {"detail", "point", "key", "main"},
                                   {"length", "short", "concise", "wordy"}};
  std::vector<Doc> docs;
  for (std::size_t i = 0; i < 40; ++i) {
    Doc d;
    const auto& t = themes[i % themes.size()];
    for (std::size_t j = 0; j < 6; ++j) d.push_back(t[(i + j) % t.size()]);
    d.push_back(themes[(i + 1) % themes.size()][i % 4]);
    docs.push_back(d);
  }
  return docs;
}

LdaOptions options(std::uint64_t seed = 3) {
  LdaOptions o;
  o.k = 5;
  o.seed = seed;
  o.iterations = 100;
  return o;
}

TEST(Lda, DistributionsSumToOne) {
  const auto m = LdaModel::fit(corpus(), options());
  EXPECT_DOUBLE_EQ(m.alpha(), 10.0);
  for (const auto& theta : m.document_topics()) {
    ASSERT_EQ(theta.size(), 5u);
    EXPECT_NEAR(std::accumulate(theta.begin(), theta.end(), 0.0), 1.0, 1e-9);
    for (double p : theta) EXPECT_GE(p, 0.0);
  }
  const auto inferred = m.infer({"flow", "order", "unknownword"}, 50, 1);
  EXPECT_NEAR(std::accumulate(inferred.begin(), inferred.end(), 0.0), 1.0, 1e-9);
}

TEST(Lda, SeededDeterminism) {
  const auto a = LdaModel::fit(corpus(), options(9));
  const auto b = LdaModel::fit(corpus(), options(9));
  EXPECT_EQ(a.assignments(), b.assignments());
  EXPECT_EQ(a.document_topics(), b.document_topics());
  EXPECT_EQ(a.top_words(4), b.top_words(4));
  EXPECT_EQ(a.infer({"fact", "claim"}, 30, 2), b.infer({"fact", "claim"}, 30, 2));
}

TEST(Lda, Preconditions) {
  EXPECT_THROW(LdaModel::fit({{"a"}, {"b"}}, options()), InvalidArgument);
  EXPECT_THROW(LdaModel::fit(std::vector<Doc>(5), options()), InvalidArgument);
}

TEST(TopicReportTest, OneHotStdDev) {
  std::vector<std::vector<double>> d = {{0.1, 0.6, 0.1, 0.1, 0.1}, {0.0, 0.9, 0.05, 0.05, 0.0}};
  const auto r = topic_report(d, 5);
  EXPECT_EQ(r.topic_mass, (std::vector<double>{0, 1, 0, 0, 0}));
  EXPECT_NEAR(r.std_dev, std::sqrt(4.0) / 5.0, 1e-12);
  EXPECT_NEAR(r.std_dev, 0.4, 1e-12);
}

TEST(TopicReportTest, UniformMassesHaveZeroStdDev) {
  std::vector<std::vector<double>> d;
  for (int t = 0; t < 5; ++t) {
    std::vector<double> v(5, 0.1);
    v[static_cast<std::size_t>(t)] = 0.6;
    d.push_back(v);
  }
  const auto r = topic_report(d, 5);
  for (double m : r.topic_mass) EXPECT_DOUBLE_EQ(m, 0.2);
  EXPECT_DOUBLE_EQ(r.std_dev, 0.0);
}

TEST(TopicReportTest, TiesGoToLowestTopic) {
  EXPECT_EQ(dominant_topic(std::vector<double>{0.3, 0.3, 0.4}), 2);
  EXPECT_EQ(dominant_topic(std::vector<double>{0.4, 0.4, 0.2}), 0);
}

TEST(TopicReportTest, MassesSumToOneOnFit) {
  const auto m = LdaModel::fit(corpus(), options());
  const auto r = topic_report(m.document_topics(), 5);
  EXPECT_NEAR(std::accumulate(r.topic_mass.begin(), r.topic_mass.end(), 0.0), 1.0, 1e-9);
  EXPECT_GE(r.std_dev, 0.0);
  EXPECT_EQ(r.documents, 40u);
}

TEST(PopulationStdDev, Simple) {
  EXPECT_DOUBLE_EQ(population_std_dev(std::vector<double>{2, 4, 4, 4, 5, 5, 7, 9}), 2.0);
}

}  // namespace
}  // namespace checkeval::analysis
