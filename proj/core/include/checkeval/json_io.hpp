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

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "checkeval/model.hpp"

namespace checkeval {

void to_json(nlohmann::json& j, const Dimension& v);
void from_json(const nlohmann::json& j, Dimension& v);
void to_json(nlohmann::json& j, const AttributeSource& v);
void from_json(const nlohmann::json& j, AttributeSource& v);
void to_json(nlohmann::json& j, const Attribute& v);
void from_json(const nlohmann::json& j, Attribute& v);
void to_json(nlohmann::json& j, const Component& v);
void from_json(const nlohmann::json& j, Component& v);
void to_json(nlohmann::json& j, const ChecklistQuestion& v);
void from_json(const nlohmann::json& j, ChecklistQuestion& v);
void to_json(nlohmann::json& j, const ChecklistProvenance& v);
void from_json(const nlohmann::json& j, ChecklistProvenance& v);
void to_json(nlohmann::json& j, const Checklist& v);
void from_json(const nlohmann::json& j, Checklist& v);
void to_json(nlohmann::json& j, const Sample& v);
void from_json(const nlohmann::json& j, Sample& v);
void to_json(nlohmann::json& j, const EvaluationRecord& v);
void from_json(const nlohmann::json& j, EvaluationRecord& v);

std::string read_text_file(const std::filesystem::path& path);

/// Writes to a sibling temporary file and renames it into place.
void write_text_file_atomic(const std::filesystem::path& path, std::string_view content);

/// Parses one JSON object per non-blank line. Throws ParseError naming the line.
std::vector<nlohmann::json> read_jsonl(const std::filesystem::path& path);

template <typename T>
std::vector<T> read_jsonl_as(const std::filesystem::path& path) {
  std::vector<T> out;
  for (const auto& j : read_jsonl(path)) out.push_back(j.get<T>());
  return out;
}

std::string to_jsonl(const std::vector<nlohmann::json>& rows);

template <typename T>
void write_jsonl(const std::filesystem::path& path, const std::vector<T>& rows) {
  std::vector<nlohmann::json> js;
  js.reserve(rows.size());
  for (const auto& r : rows) js.emplace_back(r);
  write_text_file_atomic(path, to_jsonl(js));
}

/// Pretty JSON with a trailing newline; stable for byte comparisons.
std::string dump_pretty(const nlohmann::json& j);

}  // namespace checkeval

namespace nlohmann {
template <>
struct adl_serializer<checkeval::ConditionId> {
  static checkeval::ConditionId from_json(const json& j) {
    return checkeval::ConditionId::parse(j.get<std::string>());
  }
  static void to_json(json& j, const checkeval::ConditionId& c) { j = c.to_string(); }
};
}  // namespace nlohmann
