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

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace checkeval::analysis {

struct LdaOptions {
  int k = 5;
  std::uint64_t seed = 0;
  int iterations = 500;
  /// Non-positive means 50 / k.
  double alpha = 0.0;
  double beta = 0.01;
};

/// Latent Dirichlet allocation fitted by collapsed Gibbs sampling.
class LdaModel {
 public:
  /// Needs at least k documents and a non-empty vocabulary.
  static LdaModel fit(const std::vector<std::vector<std::string>>& documents,
                      const LdaOptions& options);

  int k() const noexcept { return options_.k; }
  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return options_.beta; }
  std::size_t vocabulary_size() const noexcept { return vocabulary_.size(); }

  /// Per-document topic distribution (n_dk + alpha) / (n_d + k alpha).
  const std::vector<std::vector<double>>& document_topics() const noexcept { return theta_; }
  /// Final topic assignment of every token, per document.
  const std::vector<std::vector<int>>& assignments() const noexcept { return z_; }

  /// Topic distribution of an unseen document, sampled against the fitted
  /// topic-word counts. Unknown words are ignored.
  std::vector<double> infer(const std::vector<std::string>& document, int iterations,
                            std::uint64_t seed) const;

  /// Most probable words per topic.
  std::vector<std::vector<std::string>> top_words(std::size_t n) const;

 private:
  LdaOptions options_;
  double alpha_ = 0.0;
  std::vector<std::string> vocabulary_;
  std::map<std::string, int, std::less<>> word_ids_;
  std::vector<std::vector<int>> z_;
  std::vector<std::vector<double>> theta_;
  std::vector<std::vector<int>> topic_word_;  // [k][V]
  std::vector<int> topic_total_;
};

/// Argmax with ties to the lowest topic index.
int dominant_topic(std::span<const double> distribution);

struct TopicReport {
  int k = 0;
  std::vector<double> topic_mass;
  /// Population standard deviation of topic_mass.
  double std_dev = 0.0;
  std::size_t documents = 0;
};

/// Share of documents whose dominant topic is each of the k topics.
TopicReport topic_report(std::span<const std::vector<double>> distributions, int k);

double population_std_dev(std::span<const double> values);

}  // namespace checkeval::analysis
