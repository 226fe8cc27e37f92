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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "checkeval/dataset.hpp"
#include "checkeval/gateway.hpp"
#include "checkeval/model.hpp"
#include "checkeval/prompt.hpp"

namespace checkeval {

/// A scored example shown to think-aloud participants.
struct Exemplar {
  std::optional<std::string> source_text;
  std::string candidate_text;
  double score = 1.0;
};

inline constexpr std::size_t kExemplarCount = 4;

/// Think-aloud request for one dimension. model_id is left empty for the caller.
ChatRequest build_ta_prompt(const Dimension& dimension, std::span<const Exemplar> exemplars,
                            const PromptSet& prompts);

/// One exemplar from each quartile of the dimension's score distribution.
///
/// Samples in `exclude_ids` are skipped unless that would leave a quartile empty.
std::vector<Exemplar> select_exemplars(const Dataset& dataset, const Dimension& dimension,
                                       std::uint64_t seed,
                                       const std::vector<std::string>& exclude_ids = {});

struct CollectionError {
  std::string model_id;
  std::string message;
  std::string raw_text;
};

struct CollectionResult {
  std::vector<Attribute> attributes;
  std::vector<CollectionError> errors;
};

struct CollectOptions {
  /// Unset leaves the provider default in place.
  std::optional<double> temperature;
  int max_output_tokens = 2048;
};

/// Queries every model concurrently; output order is (model order, ascending index).
CollectionResult collect_llm_attributes(const Gateway& gateway,
                                        std::span<const std::string> model_ids,
                                        const Dimension& dimension,
                                        std::span<const Exemplar> exemplars,
                                        const PromptSet& prompts,
                                        const CollectOptions& options = {});

/// Turns a parsed think-aloud reply into attribute texts in index order.
std::vector<std::string> considerations_from_payload(const nlohmann::json& payload);

struct HumanIngestResult {
  std::vector<Attribute> attributes;
  std::vector<RecordError> errors;
};

/// Line-delimited JSON of {dimension, participant_id, text}.
HumanIngestResult ingest_human_attributes(const std::filesystem::path& path,
                                          const std::vector<Dimension>& known_dimensions);

/// Selects the pool for a condition and tags each attribute with it.
std::vector<Attribute> assemble_condition(const ConditionId& condition,
                                          std::span<const Attribute> human_pool,
                                          std::span<const Attribute> llm_pool);

/// Drops attributes whose text exactly repeats an earlier one, merging condition tags.
std::vector<Attribute> deduplicate(std::vector<Attribute> attributes);

}  // namespace checkeval
