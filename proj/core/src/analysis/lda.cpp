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

#include "checkeval/analysis/lda.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "checkeval/errors.hpp"
#include "checkeval/random.hpp"

namespace checkeval::analysis {

namespace {

int draw(Rng& rng, std::vector<double>& weights) {
  double total = 0.0;
  for (double& w : weights) {
    total += w;
    w = total;
  }
  const double u = rng.unit() * total;
  const auto it = std::upper_bound(weights.begin(), weights.end(), u);
  return static_cast<int>(std::min<std::ptrdiff_t>(it - weights.begin(),
                                                   static_cast<std::ptrdiff_t>(weights.size()) - 1));
}

}  // namespace

LdaModel LdaModel::fit(const std::vector<std::vector<std::string>>& documents, const LdaOptions& options) {
  if (options.k < 1) throw InvalidArgument("LDA needs k >= 1");
  if (documents.size() < static_cast<std::size_t>(options.k)) {
    throw InvalidArgument(fmt::format("LDA with k={} needs at least {} documents, got {}", options.k,
                                      options.k, documents.size()));
  }
  if (options.iterations < 0) throw InvalidArgument("LDA iterations must be non-negative");
  if (!(options.beta > 0.0)) throw InvalidArgument("LDA beta must be positive");

  LdaModel m;
  m.options_ = options;
  m.alpha_ = options.alpha > 0.0 ? options.alpha : 50.0 / options.k;
  for (const auto& doc : documents) {
    for (const auto& w : doc) m.word_ids_.emplace(w, 0);
  }
  if (m.word_ids_.empty()) throw InvalidArgument("LDA vocabulary is empty");
  for (auto& [w, id] : m.word_ids_) {
    id = static_cast<int>(m.vocabulary_.size());
    m.vocabulary_.push_back(w);
  }

  const int k = options.k;
  const auto v = static_cast<double>(m.vocabulary_.size());
  std::vector<std::vector<int>> words(documents.size());
  for (std::size_t d = 0; d < documents.size(); ++d) {
    for (const auto& w : documents[d]) words[d].push_back(m.word_ids_.find(w)->second);
  }

  Rng rng(options.seed);
  m.topic_word_.assign(k, std::vector<int>(m.vocabulary_.size(), 0));
  m.topic_total_.assign(k, 0);
  std::vector<std::vector<int>> doc_topic(documents.size(), std::vector<int>(k, 0));
  m.z_.resize(documents.size());
  for (std::size_t d = 0; d < documents.size(); ++d) {
    for (int w : words[d]) {
      const int t = static_cast<int>(rng.below(static_cast<std::uint64_t>(k)));
      m.z_[d].push_back(t);
      ++doc_topic[d][t];
      ++m.topic_word_[t][w];
      ++m.topic_total_[t];
    }
  }

  std::vector<double> weights(k);
  for (int it = 0; it < options.iterations; ++it) {
    for (std::size_t d = 0; d < documents.size(); ++d) {
      for (std::size_t i = 0; i < words[d].size(); ++i) {
        const int w = words[d][i];
        int t = m.z_[d][i];
        --doc_topic[d][t];
        --m.topic_word_[t][w];
        --m.topic_total_[t];
        for (int c = 0; c < k; ++c) {
          weights[c] = (doc_topic[d][c] + m.alpha_) * (m.topic_word_[c][w] + options.beta) /
                       (m.topic_total_[c] + v * options.beta);
        }
        t = draw(rng, weights);
        m.z_[d][i] = t;
        ++doc_topic[d][t];
        ++m.topic_word_[t][w];
        ++m.topic_total_[t];
      }
    }
  }

  m.theta_.resize(documents.size());
  for (std::size_t d = 0; d < documents.size(); ++d) {
    const double denom = static_cast<double>(words[d].size()) + k * m.alpha_;
    for (int c = 0; c < k; ++c) m.theta_[d].push_back((doc_topic[d][c] + m.alpha_) / denom);
  }
  return m;
}

std::vector<double> LdaModel::infer(const std::vector<std::string>& document, int iterations,
                                    std::uint64_t seed) const {
  const int k = options_.k;
  const auto v = static_cast<double>(vocabulary_.size());
  std::vector<int> words;
  for (const auto& w : document) {
    if (auto it = word_ids_.find(w); it != word_ids_.end()) words.push_back(it->second);
  }
  Rng rng(seed);
  std::vector<int> counts(k, 0), z;
  for (std::size_t i = 0; i < words.size(); ++i) {
    z.push_back(static_cast<int>(rng.below(static_cast<std::uint64_t>(k))));
    ++counts[z.back()];
  }
  std::vector<double> weights(k);
  for (int it = 0; it < iterations; ++it) {
    for (std::size_t i = 0; i < words.size(); ++i) {
      --counts[z[i]];
      for (int c = 0; c < k; ++c) {
        weights[c] = (counts[c] + alpha_) * (topic_word_[c][words[i]] + options_.beta) /
                     (topic_total_[c] + v * options_.beta);
      }
      z[i] = draw(rng, weights);
      ++counts[z[i]];
    }
  }
  std::vector<double> theta;
  const double denom = static_cast<double>(words.size()) + k * alpha_;
  for (int c = 0; c < k; ++c) theta.push_back((counts[c] + alpha_) / denom);
  return theta;
}

std::vector<std::vector<std::string>> LdaModel::top_words(std::size_t n) const {
  std::vector<std::vector<std::string>> out;
  for (const auto& row : topic_word_) {
    std::vector<std::size_t> ids(row.size());
    std::iota(ids.begin(), ids.end(), 0);
    std::stable_sort(ids.begin(), ids.end(), [&](std::size_t a, std::size_t b) { return row[a] > row[b]; });
    std::vector<std::string> words;
    for (std::size_t i = 0; i < std::min(n, ids.size()); ++i) words.push_back(vocabulary_[ids[i]]);
    out.push_back(std::move(words));
  }
  return out;
}

int dominant_topic(std::span<const double> distribution) {
  if (distribution.empty()) throw InvalidArgument("empty topic distribution");
  return static_cast<int>(std::max_element(distribution.begin(), distribution.end()) - distribution.begin());
}

double population_std_dev(std::span<const double> values) {
  if (values.empty()) throw InvalidArgument("standard deviation of nothing");
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : values) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / n);
}

TopicReport topic_report(std::span<const std::vector<double>> distributions, int k) {
  if (k < 1) throw InvalidArgument("topic report needs k >= 1");
  if (distributions.empty()) throw InvalidArgument("topic report needs at least one document");
  TopicReport r;
  r.k = k;
  r.documents = distributions.size();
  r.topic_mass.assign(k, 0.0);
  for (const auto& d : distributions) {
    if (d.size() != static_cast<std::size_t>(k)) throw InvalidArgument("topic distribution size differs from k");
    r.topic_mass[dominant_topic(d)] += 1.0;
  }
  for (double& m : r.topic_mass) m /= static_cast<double>(r.documents);
  r.std_dev = population_std_dev(r.topic_mass);
  return r;
}

}  // namespace checkeval::analysis
