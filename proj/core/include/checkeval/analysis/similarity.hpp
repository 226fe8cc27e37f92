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
#include <functional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "checkeval/gateway.hpp"
#include "checkeval/model.hpp"

namespace checkeval::analysis {

std::size_t lcs_length(std::span<const std::string> a, std::span<const std::string> b);

/// LCS-based F1; 0 when either side is empty or nothing is shared.
double rouge_l_f1(std::span<const std::string> a, std::span<const std::string> b);

/// |a ∩ b| / |a ∪ b|, with two empty sets defined as identical (1.0).
double jaccard(const std::set<std::string>& a, const std::set<std::string>& b);

/// InvalidArgument on a zero vector or a dimension mismatch.
double cosine(const EmbeddingVector& u, const EmbeddingVector& v);

enum class SimilarityMetric { RougeL, Jaccard, Cosine };

std::string to_string(SimilarityMetric metric);

struct SimilarityReport {
  SimilarityMetric metric = SimilarityMetric::RougeL;
  double mean_pairwise = 0.0;
  std::size_t pair_count = 0;
};

using Embedder = std::function<EmbeddingVector(const std::string&)>;

/// Mean metric over all unordered pairs of distinct positions.
///
/// Needs at least two attributes; Cosine additionally needs `embed`.
SimilarityReport self_similarity(std::span<const Attribute> attributes, SimilarityMetric metric,
                                 const Embedder& embed = {});

}  // namespace checkeval::analysis
