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

#include "checkeval/json_io.hpp"

#include <atomic>
#include <fstream>
#include <sstream>
#include <system_error>
#include <thread>

#include "checkeval/errors.hpp"

namespace checkeval {

using nlohmann::json;

void to_json(json& j, const Dimension& v) {
  j = json{{"name", v.name}, {"rubric", v.rubric}, {"category", to_string(v.category)}};
}

void from_json(const json& j, Dimension& v) {
  v.name = j.at("name").get<std::string>();
  v.rubric = j.at("rubric").get<std::string>();
  v.category = parse_dimension_category(j.value("category", std::string{}));
}

void to_json(json& j, const AttributeSource& v) {
  j = json{{"kind", to_string(v.kind)}, {"participant_id", v.participant_id}};
}

void from_json(const json& j, AttributeSource& v) {
  v.kind = parse_source_kind(j.at("kind").get<std::string>());
  v.participant_id = j.at("participant_id").get<std::string>();
}

void to_json(json& j, const Attribute& v) {
  j = json{{"text", v.text},
           {"dimension", v.dimension},
           {"source", v.source},
           {"condition_tags", v.condition_tags}};
}

void from_json(const json& j, Attribute& v) {
  v.text = j.at("text").get<std::string>();
  v.dimension = j.at("dimension").get<std::string>();
  v.source = j.at("source").get<AttributeSource>();
  v.condition_tags.clear();
  if (j.contains("condition_tags")) {
    for (const auto& c : j.at("condition_tags")) v.add_condition(c.get<ConditionId>());
  }
}

void to_json(json& j, const Component& v) {
  j = json{{"label", v.label}, {"dimension", v.dimension}, {"attributes", v.attributes}};
}

void from_json(const json& j, Component& v) {
  v.label = j.at("label").get<std::string>();
  v.dimension = j.at("dimension").get<std::string>();
  v.attributes = j.value("attributes", std::vector<Attribute>{});
}

void to_json(json& j, const ChecklistQuestion& v) {
  j = json{{"text", v.text}, {"component_label", v.component_label}};
}

void from_json(const json& j, ChecklistQuestion& v) {
  v.text = j.at("text").get<std::string>();
  v.component_label = j.value("component_label", std::string{});
}

void to_json(json& j, const ChecklistProvenance& v) {
  j = json{{"condition", v.condition}, {"run_id", v.run_id}, {"validated_by", v.validated_by}};
}

void from_json(const json& j, ChecklistProvenance& v) {
  v.condition = j.value("condition", std::string{});
  v.run_id = j.value("run_id", std::string{});
  v.validated_by = j.value("validated_by", std::string{});
}

void to_json(json& j, const Checklist& v) {
  j = json{{"dimension", v.dimension}, {"provenance", v.provenance}, {"questions", v.questions}};
}

void from_json(const json& j, Checklist& v) {
  v.dimension = j.at("dimension").get<std::string>();
  v.provenance = j.value("provenance", ChecklistProvenance{});
  v.questions = j.at("questions").get<std::vector<ChecklistQuestion>>();
}

void to_json(json& j, const Sample& v) {
  j = json{{"id", v.id},
           {"source_text", v.source_text ? json(*v.source_text) : json(nullptr)},
           {"candidate_text", v.candidate_text},
           {"ground_truth", v.ground_truth},
           {"group_key", v.group_key}};
}

void from_json(const json& j, Sample& v) {
  v.id = j.at("id").get<std::string>();
  v.source_text.reset();
  if (auto it = j.find("source_text"); it != j.end() && !it->is_null()) {
    v.source_text = it->get<std::string>();
  }
  v.candidate_text = j.at("candidate_text").get<std::string>();
  v.ground_truth = j.value("ground_truth", std::map<std::string, double>{});
  v.group_key = j.value("group_key", v.id);
}

void to_json(json& j, const EvaluationRecord& v) {
  j = json{{"sample_id", v.sample_id},
           {"dimension", v.dimension},
           {"answers", v.answers},
           {"yes_count", v.yes_count},
           {"score", v.score},
           {"unparseable_questions", v.unparseable_questions}};
}

void from_json(const json& j, EvaluationRecord& v) {
  v.sample_id = j.at("sample_id").get<std::string>();
  v.dimension = j.at("dimension").get<std::string>();
  v.answers = j.at("answers").get<std::vector<bool>>();
  v.yes_count = j.at("yes_count").get<std::size_t>();
  v.score = j.at("score").get<double>();
  v.unparseable_questions = j.value("unparseable_questions", std::vector<std::size_t>{});
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("error reading " + path.string());
  return ss.str();
}

void write_text_file_atomic(const std::filesystem::path& path, std::string_view content) {
  static std::atomic<unsigned> counter{0};
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create " + path.parent_path().string() + ": " + ec.message());
  }
  const auto tid = std::hash<std::thread::id>{}(std::this_thread::get_id());
  auto tmp = path;
  tmp += ".tmp." + std::to_string(tid) + "." + std::to_string(counter++);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("error writing " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot move into place " + path.string());
  }
}

std::vector<json> read_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<json> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    try {
      rows.push_back(json::parse(line));
    } catch (const json::parse_error& e) {
      throw ParseError(path.string() + ":" + std::to_string(lineno) + ": " + e.what(), line);
    }
  }
  return rows;
}

std::string to_jsonl(const std::vector<json>& rows) {
  std::string out;
  for (const auto& r : rows) {
    out += r.dump();
    out += '\n';
  }
  return out;
}

std::string dump_pretty(const json& j) { return j.dump(2) + "\n"; }

}  // namespace checkeval
