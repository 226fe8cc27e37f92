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
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace checkeval {

enum class DimensionCategory { InternalQuality, ExternalAlignment, Uncategorized };

/// A rating axis such as Coherence, with the rubric shown to every LLM stage.
struct Dimension {
  std::string name;
  std::string rubric;
  DimensionCategory category = DimensionCategory::Uncategorized;

  friend bool operator==(const Dimension&, const Dimension&) = default;
};

void validate(const Dimension& dimension);
/// Checks each dimension and that names are unique.
void validate_dimensions(const std::vector<Dimension>& dimensions);

enum class SourceKind { Human, Llm };

struct AttributeSource {
  SourceKind kind = SourceKind::Human;
  std::string participant_id;

  friend bool operator==(const AttributeSource&, const AttributeSource&) = default;
};

/// Which attribute pool feeds checklist construction.
///
/// SingleLlm and SingleHuman name exactly one participant; the pooled
/// conditions carry none. The textual form is "SL:<id>", "SH:<id>", "ML",
/// "MH" or "Comb".
class ConditionId {
 public:
  enum class Kind { SingleLlm, SingleHuman, MultipleLlms, MultipleHumans, Combination };

  static ConditionId single_llm(std::string participant_id);
  static ConditionId single_human(std::string participant_id);
  static ConditionId multiple_llms();
  static ConditionId multiple_humans();
  static ConditionId combination();

  /// Throws InvalidArgument on malformed text.
  static ConditionId parse(std::string_view text);

  Kind kind() const noexcept { return kind_; }
  const std::string& participant_id() const noexcept { return participant_id_; }
  std::string to_string() const;
  /// Filesystem-safe variant of to_string().
  std::string slug() const;

  friend bool operator==(const ConditionId&, const ConditionId&) = default;
  friend auto operator<=>(const ConditionId& a, const ConditionId& b) {
    if (auto c = a.kind_ <=> b.kind_; c != 0) return c;
    return a.participant_id_ <=> b.participant_id_;
  }

 private:
  ConditionId(Kind kind, std::string participant_id);

  Kind kind_;
  std::string participant_id_;
};

struct Attribute {
  std::string text;
  std::string dimension;
  AttributeSource source;
  std::vector<ConditionId> condition_tags;  // sorted, unique

  void add_condition(const ConditionId& condition);

  friend bool operator==(const Attribute&, const Attribute&) = default;
};

void validate(const Attribute& attribute);

struct Component {
  std::string label;
  std::string dimension;
  std::vector<Attribute> attributes;

  friend bool operator==(const Component&, const Component&) = default;
};

struct ChecklistQuestion {
  std::string text;
  std::string component_label;

  friend bool operator==(const ChecklistQuestion&, const ChecklistQuestion&) = default;
};

struct ChecklistProvenance {
  std::string condition;
  std::string run_id;
  /// Model id of the validator stage; empty means the checklist was never validated.
  std::string validated_by;

  friend bool operator==(const ChecklistProvenance&, const ChecklistProvenance&) = default;
};

struct Checklist {
  std::string dimension;
  std::vector<ChecklistQuestion> questions;
  ChecklistProvenance provenance;

  friend bool operator==(const Checklist&, const Checklist&) = default;
};

void validate(const Checklist& checklist);

struct Sample {
  std::string id;
  std::optional<std::string> source_text;
  std::string candidate_text;
  std::map<std::string, double> ground_truth;
  /// Candidates sharing one source share a group key.
  std::string group_key;

  friend bool operator==(const Sample&, const Sample&) = default;
};

void validate(const Sample& sample);

/// Per-sample, per-dimension answers and the derived score.
///
/// `answers` holds the parseable verdicts in question order; indices of
/// questions whose answer could not be parsed are listed separately, so
/// `score == scale_score(yes_count, answers.size())` always holds.
struct EvaluationRecord {
  std::string sample_id;
  std::string dimension;
  std::vector<bool> answers;
  std::size_t yes_count = 0;
  double score = 1.0;
  std::vector<std::size_t> unparseable_questions;

  friend bool operator==(const EvaluationRecord&, const EvaluationRecord&) = default;
};

void validate(const EvaluationRecord& record);

/// Affine map of a yes-ratio onto [1, 5]: 1 + 4 * yes_count / total.
double scale_score(std::size_t yes_count, std::size_t total);

EvaluationRecord make_record(std::string sample_id, std::string dimension,
                             std::vector<bool> answers,
                             std::vector<std::size_t> unparseable_questions = {});

std::string to_string(DimensionCategory category);
DimensionCategory parse_dimension_category(std::string_view text);
std::string to_string(SourceKind kind);
SourceKind parse_source_kind(std::string_view text);

}  // namespace checkeval
