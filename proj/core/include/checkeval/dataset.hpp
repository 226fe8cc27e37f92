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

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "checkeval/model.hpp"

namespace checkeval {

struct Dataset {
  std::string name;
  std::vector<Sample> samples;
  std::vector<Dimension> dimensions;

  /// Throws InvalidArgument if ids repeat or a score key is undeclared.
  void validate() const;
  const Dimension& dimension(std::string_view name) const;
  bool has_dimension(std::string_view name) const;
};

struct RecordError {
  std::size_t line = 0;  // 1-based; for CSV, the data row number
  std::string id;
  std::string message;
};

struct LoadReport {
  std::string path;
  std::size_t parsed = 0;
  std::size_t skipped = 0;
  std::vector<RecordError> errors;
};

enum class LoadPolicy { SkipInvalid, FailFast };

struct LoadResult {
  Dataset dataset;
  LoadReport report;
};

/// SummEval's four dimensions with their rubric text.
std::vector<Dimension> summeval_dimensions();
/// ELLIPSE's seven essay traits.
std::vector<Dimension> ellipse_dimensions();

/// Loads the SummEval paired annotation file (one JSON object per line).
///
/// Expected fields per record: `id` (source article id, the group key),
/// `model_id` (summarizer id), `decoded` (the summary), `expert_annotations`
/// (three objects with integer coherence/consistency/fluency/relevance),
/// and optionally `text` (the source article). Ground truth is the mean of
/// the expert scores. FailFast throws ParseError on the first bad record.
LoadResult load_summeval(const std::filesystem::path& path,
                         LoadPolicy policy = LoadPolicy::SkipInvalid);

/// Loads the ELLIPSE CSV: an id column (text_id or text_id_kaggle), a text
/// column (full_text or text) and one column per trait, matched case-insensitively.
LoadResult load_ellipse(const std::filesystem::path& path,
                        LoadPolicy policy = LoadPolicy::SkipInvalid);

/// Half-point score bins over [1, 5]; 5.0 falls into the last bin.
inline constexpr std::size_t kScoreBins = 8;
std::size_t score_bin(double score);
using ScoreHistogram = std::array<std::size_t, kScoreBins>;
ScoreHistogram histogram(const Dataset& dataset, std::string_view dimension);

/// Hamilton (largest-remainder) apportionment of `total` units across `counts`.
///
/// Ties in the fractional remainder go to the lower index.
std::vector<std::size_t> largest_remainder(const std::vector<std::size_t>& counts,
                                           std::size_t total);

/// Distribution-preserving subset.
///
/// Units are source groups (a singleton group per ungrouped sample). Each
/// unit is keyed by the tuple of binned mean scores over every dimension;
/// strata receive largest-remainder quotas and units inside a stratum are
/// drawn by a seeded shuffle. Whole groups are kept or dropped. The output
/// keeps the input order.
Dataset stratified_sample(const Dataset& dataset, double fraction, std::uint64_t seed);

}  // namespace checkeval
