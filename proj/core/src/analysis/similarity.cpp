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

#include "checkeval/analysis/similarity.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "checkeval/errors.hpp"
#include "checkeval/text.hpp"

namespace checkeval::analysis {

std::size_t lcs_length(std::span<const std::string> a, std::span<const std::string> b) {
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

double rouge_l_f1(std::span<const std::string> a, std::span<const std::string> b) {
  if (a.empty() || b.empty()) return 0.0;
  const auto lcs = static_cast<double>(lcs_length(a, b));
  if (lcs == 0.0) return 0.0;
  const double p = lcs / static_cast<double>(a.size());
  const double r = lcs / static_cast<double>(b.size());
  return 2.0 * p * r / (p + r);
}

double jaccard(const std::set<std::string>& a, const std::set<std::string>& b) {
  if (a.empty() && b.empty()) return 1.0;
  std::size_t shared = 0;
  for (const auto& t : a) shared += b.contains(t);
  return static_cast<double>(shared) / static_cast<double>(a.size() + b.size() - shared);
}

double cosine(const EmbeddingVector& u, const EmbeddingVector& v) {
  if (u.values.size() != v.values.size()) {
    throw InvalidArgument(fmt::format("embedding sizes differ: {} vs {}", u.values.size(), v.values.size()));
  }
  double dot = 0.0, nu = 0.0, nv = 0.0;
  for (std::size_t i = 0; i < u.values.size(); ++i) {
    dot += u.values[i] * v.values[i];
    nu += u.values[i] * u.values[i];
    nv += v.values[i] * v.values[i];
  }
  if (nu == 0.0 || nv == 0.0) throw InvalidArgument("cosine of a zero vector");
  return std::clamp(dot / (std::sqrt(nu) * std::sqrt(nv)), -1.0, 1.0);
}

std::string to_string(SimilarityMetric metric) {
  switch (metric) {
    case SimilarityMetric::RougeL: return "rouge_l";
    case SimilarityMetric::Jaccard: return "jaccard";
    case SimilarityMetric::Cosine: return "cosine";
  }
  return "unknown";
}

SimilarityReport self_similarity(std::span<const Attribute> attributes, SimilarityMetric metric,
                                 const Embedder& embed) {
  if (attributes.size() < 2) throw InvalidArgument("self-similarity needs at least two attributes");
  if (metric == SimilarityMetric::Cosine && !embed) throw InvalidArgument("cosine needs an embedder");
  const std::size_t n = attributes.size();
  std::vector<std::vector<std::string>> tokens;
  std::vector<std::set<std::string>> sets;
  std::vector<EmbeddingVector> vectors;
  for (const auto& a : attributes) {
    switch (metric) {
      case SimilarityMetric::RougeL: tokens.push_back(text::tokenize(a.text)); break;
      case SimilarityMetric::Jaccard: {
        auto t = text::tokenize(a.text);
        sets.emplace_back(t.begin(), t.end());
        break;
      }
      case SimilarityMetric::Cosine: vectors.push_back(embed(a.text)); break;
    }
  }
  SimilarityReport report{metric, 0.0, 0};
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      switch (metric) {
        case SimilarityMetric::RougeL: sum += rouge_l_f1(tokens[i], tokens[j]); break;
        case SimilarityMetric::Jaccard: sum += jaccard(sets[i], sets[j]); break;
        case SimilarityMetric::Cosine: sum += cosine(vectors[i], vectors[j]); break;
      }
      ++report.pair_count;
    }
  }
  report.mean_pairwise = sum / static_cast<double>(report.pair_count);
  return report;
}

}  // namespace checkeval::analysis
