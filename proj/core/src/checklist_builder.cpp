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

#include "checkeval/checklist_builder.hpp"

#include <algorithm>
#include <map>
#include <set>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "checkeval/hash.hpp"
#include "checkeval/json_payload.hpp"
#include "checkeval/text.hpp"

namespace checkeval {

using nlohmann::json;

std::string to_string(BuildStage stage) {
  switch (stage) {
    case BuildStage::Extract: return "extract";
    case BuildStage::Cluster: return "cluster";
    case BuildStage::KeyQuestions: return "key_questions";
    case BuildStage::SubQuestions: return "sub_questions";
    case BuildStage::Validate: return "validate";
  }
  return "unknown";
}

json trace_to_json(const ConstructionTrace& trace) {
  json j;
  j["components"] = json::array();
  for (const auto& c : trace.components) {
    json attrs = json::array();
    for (const auto& a : c.attributes) attrs.push_back(a.text);
    j["components"].push_back({{"label", c.label}, {"attributes", attrs}});
  }
  j["key_questions"] = json::array();
  for (const auto& k : trace.key_questions) {
    j["key_questions"].push_back({{"component_label", k.component_label}, {"question", k.question}});
  }
  j["sub_questions"] = json::array();
  for (const auto& s : trace.sub_questions) {
    j["sub_questions"].push_back({{"component_label", s.component_label}, {"questions", s.questions}});
  }
  j["validated_questions"] = trace.validated_questions;
  j["raw_responses"] = json::array();
  for (const auto& r : trace.raw_responses) {
    j["raw_responses"].push_back(
        {{"stage", to_string(r.stage)}, {"model_id", r.response.model_id}, {"text", r.response.text}});
  }
  j["warnings"] = trace.warnings;
  return j;
}

namespace {

void warn(ConstructionTrace& trace, std::string message) {
  spdlog::warn("checklist construction: {}", message);
  trace.warnings.push_back(std::move(message));
}

json attribute_texts(std::span<const Attribute> attributes) {
  json j = json::array();
  for (const auto& a : attributes) j.push_back(a.text);
  return j;
}

json expect_object(json payload, BuildStage stage, const std::string& raw) {
  if (!payload.is_object()) {
    throw ParseError(to_string(stage) + " reply is not a JSON object", raw);
  }
  return payload;
}

bool key_mentions_component(std::string_view key) { return text::contains_word(key, "component"); }

/// Index of the label among `labels` by match key, if any.
std::optional<std::size_t> find_label(const std::vector<std::string>& keys, std::string_view label) {
  const auto k = text::match_key(label);
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (keys[i] == k) return i;
  }
  return std::nullopt;
}

}  // namespace

ChecklistBuilder::ChecklistBuilder(const Gateway& gateway, PromptSet prompts, BuilderOptions options)
    : gateway_(gateway), prompts_(std::move(prompts)), options_(std::move(options)) {
  if (options_.max_components < 1 || options_.max_components > 9) {
    throw InvalidArgument("max_components must lie in [1, 9]");
  }
  if (text::is_blank(options_.model_id)) throw InvalidArgument("construction model id is empty");
}

ChatResponse ChecklistBuilder::ask(BuildStage stage, std::string system, std::string user,
                                   ConstructionTrace& trace) const {
  ChatRequest req;
  req.model_id = options_.model_id;
  req.system_message = std::move(system);
  req.user_message = std::move(user);
  req.temperature = options_.temperature;
  req.max_output_tokens = options_.max_output_tokens;
  auto response = gateway_.complete(req);
  trace.raw_responses.push_back({stage, response});
  return response;
}

std::vector<Component> ChecklistBuilder::extract_components(std::span<const Attribute> attributes,
                                                            const Dimension& dimension,
                                                            ConstructionTrace& trace) const {
  if (attributes.empty()) throw InvalidArgument("component extraction needs attributes");
  const auto max = static_cast<std::size_t>(options_.max_components);
  const auto reply = ask(BuildStage::Extract,
                         prompts_.render("extract_system", {{"Dimension", dimension.name},
                                                            {"Rubric", dimension.rubric},
                                                            {"Max Components", std::to_string(max)}}),
                         prompts_.render("extract_user", {{"Attributes", attribute_texts(attributes).dump()}}),
                         trace);
  const json payload = parse_json_payload(reply.text);
  if (!payload.is_array()) throw ParseError("extract reply is not a JSON list", reply.text);
  std::vector<Component> out;
  std::vector<std::string> keys;
  for (const auto& v : payload) {
    if (!v.is_string()) throw ParseError("component label is not a string", reply.text);
    const std::string label = text::trim(v.get<std::string>());
    if (label.empty()) continue;
    if (find_label(keys, label)) {
      warn(trace, "duplicate component '" + label + "' dropped");
      continue;
    }
    keys.push_back(text::match_key(label));
    out.push_back(Component{label, dimension.name, {}});
  }
  if (out.empty()) throw ConstructionError("component extraction returned no components");
  if (out.size() > max) {
    warn(trace, fmt::format("{} components returned; keeping the first {}", out.size(), max));
    out.resize(max);
  }
  return out;
}

std::vector<Component> ChecklistBuilder::cluster_attributes(std::vector<Component> components,
                                                            std::span<const Attribute> attributes,
                                                            ConstructionTrace& trace) const {
  if (components.empty()) throw InvalidArgument("clustering needs at least one component");
  json labels = json::array();
  std::vector<std::string> keys;
  for (auto& c : components) {
    labels.push_back(c.label);
    keys.push_back(text::match_key(c.label));
    c.attributes.clear();
  }
  const auto reply = ask(BuildStage::Cluster, prompts_.get("cluster_system"),
                         prompts_.render("cluster_user", {{"Components", labels.dump()},
                                                          {"Attributes", attribute_texts(attributes).dump()}}),
                         trace);
  const json payload = expect_object(parse_json_payload(reply.text), BuildStage::Cluster, reply.text);

  std::multimap<std::string, std::size_t> by_key;
  for (std::size_t i = 0; i < attributes.size(); ++i) by_key.emplace(text::match_key(attributes[i].text), i);

  std::size_t matched = 0;
  for (const auto& item : payload.items()) {
    const std::string label = item.key();
    const auto& values = item.value();
    const auto ci = find_label(keys, label);
    if (!ci) {
      warn(trace, "cluster reply names unknown component '" + label + "'");
      continue;
    }
    if (!values.is_array()) {
      warn(trace, "cluster entry for '" + label + "' is not a list");
      continue;
    }
    std::set<std::size_t> taken;
    for (const auto& v : values) {
      if (!v.is_string()) {
        warn(trace, "non-string attribute under '" + label + "' ignored");
        continue;
      }
      auto [lo, hi] = by_key.equal_range(text::match_key(v.get<std::string>()));
      if (lo == hi) {
        warn(trace, "attribute not in the input set dropped: " + v.get<std::string>());
        continue;
      }
      for (auto it = lo; it != hi; ++it) {
        if (taken.insert(it->second).second) {
          components[*ci].attributes.push_back(attributes[it->second]);
          ++matched;
        }
      }
    }
  }
  if (matched == 0) throw ConstructionError("clustering matched no input attributes");
  return components;
}

std::vector<KeyQuestion> ChecklistBuilder::generate_key_questions(std::span<const Component> components,
                                                                  const Dimension& dimension,
                                                                  ConstructionTrace& trace) const {
  if (components.empty()) throw InvalidArgument("key question generation needs components");
  json block = json::object();
  std::vector<std::string> keys;
  for (const auto& c : components) {
    if (c.attributes.empty()) warn(trace, "component '" + c.label + "' has no attributes");
    block[c.label] = attribute_texts(c.attributes);
    keys.push_back(text::match_key(c.label));
  }
  const auto reply = ask(BuildStage::KeyQuestions,
                         prompts_.render("keyq_system", {{"Dimension", dimension.name}}),
                         prompts_.render("keyq_user", {{"Dimension", dimension.name},
                                                       {"Rubric of a dimension", dimension.rubric},
                                                       {"Components and attributes", block.dump()}}),
                         trace);
  const json payload =
      expect_object(parse_json_payload(reply.text), BuildStage::KeyQuestions, reply.text);

  std::vector<std::optional<std::string>> found(components.size());
  for (const auto& item : payload.items()) {
    const std::string label = item.key();
    const auto& value = item.value();
    if (key_mentions_component(label)) {
      throw ConstructionError("key question reply uses a forbidden key: '" + label + "'");
    }
    const auto ci = find_label(keys, label);
    if (!ci) {
      warn(trace, "key question for unknown component '" + label + "' ignored");
      continue;
    }
    if (!value.is_string() || text::is_blank(value.get<std::string>())) {
      throw ConstructionError("key question for '" + components[*ci].label + "' is not a question");
    }
    found[*ci] = text::trim(value.get<std::string>());
  }
  std::vector<KeyQuestion> out;
  for (std::size_t i = 0; i < components.size(); ++i) {
    if (!found[i]) throw ConstructionError("no key question for component '" + components[i].label + "'");
    out.push_back({components[i].label, *found[i]});
  }
  return out;
}

std::vector<SubQuestionGroup> ChecklistBuilder::generate_sub_questions(
    std::span<const KeyQuestion> key_questions, const Dimension& dimension,
    ConstructionTrace& trace) const {
  if (key_questions.empty()) throw InvalidArgument("sub-question generation needs key questions");
  json block = json::object();
  std::vector<std::string> keys;
  for (const auto& k : key_questions) {
    block[k.component_label] = k.question;
    keys.push_back(text::match_key(k.component_label));
  }
  const auto reply = ask(BuildStage::SubQuestions, prompts_.get("subq_system"),
                         prompts_.render("subq_user", {{"Dimension", dimension.name},
                                                       {"Rubric of a dimension", dimension.rubric},
                                                       {"Components and questions", block.dump()}}),
                         trace);
  const json payload =
      expect_object(parse_json_payload(reply.text), BuildStage::SubQuestions, reply.text);

  std::vector<std::optional<std::vector<std::string>>> found(key_questions.size());
  for (const auto& item : payload.items()) {
    const std::string label = item.key();
    const auto& value = item.value();
    const auto ki = find_label(keys, label);
    if (!ki) {
      warn(trace, "sub-questions for unknown component '" + label + "' ignored");
      continue;
    }
    const auto& name = key_questions[*ki].component_label;
    if (!value.is_array()) throw ConstructionError("sub-questions for '" + name + "' are not a list");
    std::vector<std::string> qs;
    for (const auto& v : value) {
      if (!v.is_string()) throw ConstructionError("non-string sub-question under '" + name + "'");
      auto q = text::trim(v.get<std::string>());
      if (!q.empty()) qs.push_back(std::move(q));
    }
    if (qs.empty()) throw ConstructionError("no sub-questions for component '" + name + "'");
    found[*ki] = std::move(qs);
  }
  std::vector<SubQuestionGroup> out;
  for (std::size_t i = 0; i < key_questions.size(); ++i) {
    if (!found[i]) {
      throw ConstructionError("no sub-questions for component '" + key_questions[i].component_label + "'");
    }
    out.push_back({key_questions[i].component_label, std::move(*found[i])});
  }
  return out;
}

std::vector<std::string> ChecklistBuilder::validate_questions(std::span<const std::string> sub_questions,
                                                              const Dimension& dimension,
                                                              ConstructionTrace& trace) const {
  if (sub_questions.empty()) throw InvalidArgument("validation needs sub-questions");
  const json list(std::vector<std::string>(sub_questions.begin(), sub_questions.end()));
  const auto reply = ask(BuildStage::Validate, prompts_.get("validate_system"),
                         prompts_.render("validate_user", {{"Dimension", dimension.name},
                                                           {"Rubric of a dimension", dimension.rubric},
                                                           {"Sub-questions", list.dump()}}),
                         trace);
  const json payload = parse_json_payload(reply.text);
  if (!payload.is_array()) throw ParseError("validation reply is not a JSON list", reply.text);
  std::vector<std::string> out;
  for (const auto& v : payload) {
    if (!v.is_string()) throw ParseError("validated question is not a string", reply.text);
    auto q = text::trim(v.get<std::string>());
    if (!q.empty()) out.push_back(std::move(q));
  }
  if (out.empty()) throw ConstructionError("validation returned no questions");
  if (out.size() > sub_questions.size()) {
    throw ConstructionError(fmt::format("validation returned {} questions for {} inputs", out.size(),
                                        sub_questions.size()));
  }
  return out;
}

ChecklistBuilder::Result ChecklistBuilder::build(std::span<const Attribute> attributes,
                                                 const Dimension& dimension,
                                                 const std::string& condition) const {
  validate(dimension);
  ConstructionTrace trace;
  try {
    trace.components = extract_components(attributes, dimension, trace);
    trace.components = cluster_attributes(trace.components, attributes, trace);
    trace.key_questions = generate_key_questions(trace.components, dimension, trace);
    trace.sub_questions = generate_sub_questions(trace.key_questions, dimension, trace);
    std::vector<std::string> flat;
    for (const auto& g : trace.sub_questions) flat.insert(flat.end(), g.questions.begin(), g.questions.end());
    trace.validated_questions = validate_questions(flat, dimension, trace);
  } catch (const ChecklistBuildFailure&) {
    throw;
  } catch (const Error& e) {
    throw ChecklistBuildFailure(dimension.name + " / " + condition + ": " + e.what(), std::move(trace));
  }

  std::map<std::string, std::string> label_of;
  for (const auto& g : trace.sub_questions) {
    for (const auto& q : g.questions) label_of.emplace(text::match_key(q), g.component_label);
  }
  Checklist checklist;
  checklist.dimension = dimension.name;
  for (const auto& q : trace.validated_questions) {
    auto it = label_of.find(text::match_key(q));
    checklist.questions.push_back({q, it != label_of.end() ? it->second : std::string(kMergedLabel)});
  }

  json inputs = json::array({dimension.name, dimension.rubric, condition, options_.model_id,
                             options_.max_components, attribute_texts(attributes)});
  checklist.provenance = {condition, sha256_hex(inputs.dump()).substr(0, 16), options_.model_id};
  return {std::move(checklist), std::move(trace)};
}

}  // namespace checkeval
