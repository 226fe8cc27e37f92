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

#include "checkeval/model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>

#include "checkeval/errors.hpp"
#include "checkeval/text.hpp"

namespace checkeval {

void validate(const Dimension& dimension) {
  if (text::is_blank(dimension.name)) throw InvalidArgument("dimension name is empty");
  if (text::is_blank(dimension.rubric)) {
    throw InvalidArgument("dimension '" + dimension.name + "' has an empty rubric");
  }
}

void validate_dimensions(const std::vector<Dimension>& dimensions) {
  std::set<std::string> seen;
  for (const auto& d : dimensions) {
    validate(d);
    if (!seen.insert(d.name).second) {
      throw InvalidArgument("duplicate dimension name '" + d.name + "'");
    }
  }
}

ConditionId::ConditionId(Kind kind, std::string participant_id)
    : kind_(kind), participant_id_(std::move(participant_id)) {}

ConditionId ConditionId::single_llm(std::string participant_id) {
  if (text::is_blank(participant_id)) throw InvalidArgument("SL condition needs a participant id");
  return ConditionId(Kind::SingleLlm, std::move(participant_id));
}

ConditionId ConditionId::single_human(std::string participant_id) {
  if (text::is_blank(participant_id)) throw InvalidArgument("SH condition needs a participant id");
  return ConditionId(Kind::SingleHuman, std::move(participant_id));
}

ConditionId ConditionId::multiple_llms() { return ConditionId(Kind::MultipleLlms, ""); }
ConditionId ConditionId::multiple_humans() { return ConditionId(Kind::MultipleHumans, ""); }
ConditionId ConditionId::combination() { return ConditionId(Kind::Combination, ""); }

ConditionId ConditionId::parse(std::string_view raw) {
  const std::string t = text::trim(raw);
  if (t == "ML") return multiple_llms();
  if (t == "MH") return multiple_humans();
  if (t == "Comb") return combination();
  if (t.size() > 3 && t[2] == ':') {
    const std::string prefix = t.substr(0, 2);
    std::string id = text::trim(t.substr(3));
    if (prefix == "SL") return single_llm(std::move(id));
    if (prefix == "SH") return single_human(std::move(id));
  }
  throw InvalidArgument("malformed condition id '" + t +
                        "' (expected SL:<id>, SH:<id>, ML, MH or Comb)");
}

std::string ConditionId::to_string() const {
  switch (kind_) {
    case Kind::SingleLlm: return "SL:" + participant_id_;
    case Kind::SingleHuman: return "SH:" + participant_id_;
    case Kind::MultipleLlms: return "ML";
    case Kind::MultipleHumans: return "MH";
    case Kind::Combination: return "Comb";
  }
  return {};
}

std::string ConditionId::slug() const {
  std::string s = to_string();
  for (char& c : s) {
    const auto u = static_cast<unsigned char>(c);
    if (!(std::isalnum(u) || c == '-' || c == '.' || c == '_')) c = '_';
  }
  return s;
}

void Attribute::add_condition(const ConditionId& condition) {
  auto it = std::lower_bound(condition_tags.begin(), condition_tags.end(), condition);
  if (it == condition_tags.end() || *it != condition) condition_tags.insert(it, condition);
}

void validate(const Attribute& attribute) {
  if (text::is_blank(attribute.text)) throw InvalidArgument("attribute text is empty");
  if (text::is_blank(attribute.dimension)) throw InvalidArgument("attribute has no dimension");
  if (text::is_blank(attribute.source.participant_id)) {
    throw InvalidArgument("attribute source has no participant id");
  }
}

void validate(const Checklist& checklist) {
  if (checklist.questions.empty()) {
    throw InvalidArgument("checklist for '" + checklist.dimension + "' has no questions");
  }
  for (const auto& q : checklist.questions) {
    if (text::is_blank(q.text)) throw InvalidArgument("checklist question is empty");
  }
  if (checklist.provenance.validated_by.empty()) {
    throw InvalidArgument("checklist for '" + checklist.dimension + "' carries no validation stamp");
  }
}

void validate(const Sample& sample) {
  if (text::is_blank(sample.candidate_text)) {
    throw InvalidArgument("sample '" + sample.id + "' has empty candidate text");
  }
  for (const auto& [dim, score] : sample.ground_truth) {
    if (!(score >= 1.0 && score <= 5.0)) {
      throw InvalidArgument("sample '" + sample.id + "' score for " + dim +
                            " outside [1, 5]: " + std::to_string(score));
    }
  }
}

double scale_score(std::size_t yes_count, std::size_t total) {
  if (total == 0) throw InvalidArgument("scale_score: total must be positive");
  if (yes_count > total) throw InvalidArgument("scale_score: yes_count exceeds total");
  return 1.0 + 4.0 * (static_cast<double>(yes_count) / static_cast<double>(total));
}

EvaluationRecord make_record(std::string sample_id, std::string dimension,
                             std::vector<bool> answers,
                             std::vector<std::size_t> unparseable_questions) {
  EvaluationRecord r;
  r.sample_id = std::move(sample_id);
  r.dimension = std::move(dimension);
  r.yes_count = static_cast<std::size_t>(std::count(answers.begin(), answers.end(), true));
  r.score = scale_score(r.yes_count, answers.size());
  r.answers = std::move(answers);
  r.unparseable_questions = std::move(unparseable_questions);
  return r;
}

void validate(const EvaluationRecord& record) {
  const auto yes = static_cast<std::size_t>(
      std::count(record.answers.begin(), record.answers.end(), true));
  if (yes != record.yes_count) {
    throw InvalidArgument("record '" + record.sample_id + "' yes_count does not match answers");
  }
  if (record.score != scale_score(record.yes_count, record.answers.size())) {
    throw InvalidArgument("record '" + record.sample_id + "' score does not match answers");
  }
}

std::string to_string(DimensionCategory category) {
  switch (category) {
    case DimensionCategory::InternalQuality: return "internal_quality";
    case DimensionCategory::ExternalAlignment: return "external_alignment";
    case DimensionCategory::Uncategorized: return "uncategorized";
  }
  return "uncategorized";
}

DimensionCategory parse_dimension_category(std::string_view t) {
  if (t == "internal_quality") return DimensionCategory::InternalQuality;
  if (t == "external_alignment") return DimensionCategory::ExternalAlignment;
  if (t == "uncategorized" || t.empty()) return DimensionCategory::Uncategorized;
  throw InvalidArgument("unknown dimension category '" + std::string(t) + "'");
}

std::string to_string(SourceKind kind) { return kind == SourceKind::Human ? "human" : "llm"; }

SourceKind parse_source_kind(std::string_view t) {
  if (t == "human") return SourceKind::Human;
  if (t == "llm") return SourceKind::Llm;
  throw InvalidArgument("unknown attribute source kind '" + std::string(t) + "'");
}

}  // namespace checkeval
