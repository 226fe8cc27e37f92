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

#include "mock_responder.hpp"

#include <algorithm>
#include <array>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "checkeval/errors.hpp"
#include "checkeval/hash.hpp"
#include "checkeval/text.hpp"

namespace checkeval::tools {

using nlohmann::json;

namespace {

struct Theme {
  std::string_view label;
  std::array<std::string_view, 4> keywords;
  std::array<std::string_view, 3> considerations;
};

constexpr std::array<Theme, 7> kThemes{{
    {"Logical Flow",
     {"flow", "order", "sequence", "transition"},
     {"Check whether ideas follow a logical order from one sentence to the next.",
      "Look for transitions that connect each point to the previous one.",
      "Consider whether the sequence of events is easy to follow."}},
    {"Structure",
     {"structure", "organized", "organization", "paragraph"},
     {"Check whether the text is organized around a clear structure.",
      "Consider whether related sentences are grouped together.",
      "Evaluate whether the overall organization supports the main idea."}},
    {"Clarity",
     {"clear", "clarity", "understand", "ambiguous"},
     {"Check whether every sentence is clear on a first reading.",
      "Consider whether references and pronouns are easy to understand.",
      "Look for ambiguous wording that hides the intended meaning."}},
    {"Accuracy",
     {"fact", "facts", "accurate", "correct"},
     {"Check whether the facts stated agree with the source material.",
      "Consider whether names, numbers and dates are accurate.",
      "Look for claims that are not supported by the source."}},
    {"Detail",
     {"detail", "details", "information", "important"},
     {"Check whether the important information is included.",
      "Consider whether the level of detail is balanced across points.",
      "Look for minor details that crowd out the key information."}},
    {"Language",
     {"grammar", "word", "words", "spelling"},
     {"Check whether the grammar of each sentence is correct.",
      "Consider whether word choice is precise and natural.",
      "Look for spelling mistakes or typos."}},
    {"Conciseness",
     {"concise", "redundant", "repetition", "length"},
     {"Check whether the text avoids redundant statements.",
      "Consider whether the length is appropriate for the content.",
      "Look for repetition that adds nothing new."}},
}};

double unit_hash(std::string_view key) {
  return static_cast<double>(std::stoull(sha256_hex(key).substr(0, 13), nullptr, 16)) / 0x1p52;
}

std::string_view theme_of(std::string_view attribute) {
  const auto tokens = text::tokenize(attribute);
  for (const auto& t : kThemes) {
    for (auto k : t.keywords) {
      if (std::find(tokens.begin(), tokens.end(), k) != tokens.end()) return t.label;
    }
  }
  const auto i = static_cast<std::size_t>(unit_hash(attribute) * kThemes.size());
  return kThemes[std::min(i, kThemes.size() - 1)].label;
}

/// Static text of a template before its first placeholder.
std::string fixed_prefix(std::string_view tpl) { return std::string(tpl.substr(0, tpl.find('{'))); }

/// Value substituted for `{name}` in a template whose earlier text is literal.
std::string placeholder_value(std::string_view tpl, std::string_view rendered, std::string_view name) {
  const auto pos = tpl.find("{" + std::string(name) + "}");
  if (pos == std::string_view::npos) throw InvalidArgument("template lacks {" + std::string(name) + "}");
  const auto after = tpl.substr(pos + name.size() + 2);
  const auto literal = after.substr(0, std::min(after.find('{'), after.find('\n')));
  const auto rest = rendered.substr(pos);
  const auto end = literal.empty() ? rest.find('\n') : rest.find(literal);
  return std::string(rest.substr(0, end));
}

/// JSON on the line that starts with `prefix`, or on the line after a header line.
json json_after(std::string_view body, std::string_view marker, bool header) {
  auto pos = body.find(marker);
  if (pos == std::string_view::npos) throw ParseError("marker not found: " + std::string(marker));
  pos += marker.size();
  if (header) pos = body.find('\n', pos) + 1;
  const auto end = body.find('\n', pos);
  return json::parse(body.substr(pos, end == std::string_view::npos ? body.npos : end - pos));
}

std::string lower_label(std::string_view label) {
  std::string s(label);
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace

RuleResponder::RuleResponder(PromptSet prompts, const Dataset& dataset) : prompts_(std::move(prompts)) {
  for (const auto& s : dataset.samples) truth_by_candidate_[s.candidate_text] = s.ground_truth;
}

std::string RuleResponder::reply(const ChatRequest& r) const {
  auto is = [&](std::string_view key) {
    return r.system_message.starts_with(fixed_prefix(prompts_.get(key)));
  };
  // Longer prefixes first: several system templates share an opening.
  if (is("validate_system")) return validate(r);
  if (is("subq_system")) return sub_questions(r);
  if (is("keyq_system")) return key_questions(r);
  if (is("extract_system")) return extract(r);
  if (is("cluster_system")) return cluster(r);
  if (is("answer_system")) return answer(r);
  if (is("ta_system")) return think_aloud(r);
  return "I cannot help with that.";
}

std::string RuleResponder::think_aloud(const ChatRequest& r) const {
  const auto dim = placeholder_value(prompts_.get("ta_system"), r.system_message, "Dimension");
  std::vector<std::pair<double, std::string_view>> bank;
  for (const auto& t : kThemes) {
    for (auto c : t.considerations) bank.emplace_back(unit_hash(r.model_id + "|" + dim + "|" + std::string(c)), c);
  }
  std::sort(bank.begin(), bank.end());
  json out = json::object();
  for (std::size_t i = 0; i < 6; ++i) {
    out[std::to_string(i + 1)] = fmt::format("{} ({})", bank[i].second, dim);
  }
  return "Here are my considerations:\n" + out.dump();
}

std::string RuleResponder::extract(const ChatRequest& r) const {
  const auto attrs = json_after(r.user_message, "Attributes: ", false);
  // Most frequently mentioned themes first.
  std::map<std::string, int> count;
  for (const auto& a : attrs) ++count[std::string(theme_of(a.get<std::string>()))];
  std::vector<std::pair<int, std::string>> ranked;
  for (const auto& [label, n] : count) ranked.emplace_back(-n, label);
  std::sort(ranked.begin(), ranked.end());
  std::vector<std::string> labels;
  for (const auto& [_, label] : ranked) labels.push_back(label);
  return json(labels).dump();
}

std::string RuleResponder::cluster(const ChatRequest& r) const {
  const auto components = json_after(r.user_message, "Components: ", false);
  const auto attrs = json_after(r.user_message, "Attributes: ", false);
  json out = json::object();
  for (const auto& c : components) out[c.get<std::string>()] = json::array();
  for (const auto& a : attrs) {
    const std::string label(theme_of(a.get<std::string>()));
    if (out.contains(label)) out[label].push_back(a);
  }
  return "```json\n" + out.dump(2) + "\n```";
}

std::string RuleResponder::key_questions(const ChatRequest& r) const {
  const auto dim = placeholder_value(prompts_.get("keyq_system"), r.system_message, "Dimension");
  const auto block = json_after(r.user_message, "# Components and attributes", true);
  json out = json::object();
  for (const auto& item : block.items()) {
    const std::string label = item.key();
    out[label] = fmt::format("Does the text show good {} with respect to {}?", lower_label(label), dim);
  }
  return out.dump();
}

std::string RuleResponder::sub_questions(const ChatRequest& r) const {
  const auto dim = placeholder_value(prompts_.get("subq_user"), r.user_message, "Dimension");
  const auto block = json_after(r.user_message, "# Components and corresponding questions", true);
  json out = json::object();
  for (const auto& item : block.items()) {
    const std::string label = item.key();
    const auto l = lower_label(label);
    out[label] = {fmt::format("Is the {} of the text consistent throughout, as far as {} is concerned?", l, dim),
                  fmt::format("Does the text handle {} without lapses that hurt its {}?", l, dim)};
  }
  return out.dump();
}

std::string RuleResponder::validate(const ChatRequest& r) const {
  return json_after(r.user_message, "# Sub-questions", true).dump();
}

std::string RuleResponder::answer(const ChatRequest& r) const {
  const auto dim = placeholder_value(prompts_.get("answer_system"), r.system_message, "Dimension");
  const auto& user = r.user_message;
  const auto qpos = user.rfind("\nQuestion: ");
  if (qpos == std::string::npos) return "Unsure.";
  const auto qend = user.find('\n', qpos + 1);
  const auto question = user.substr(qpos + 11, qend == std::string::npos ? std::string::npos : qend - qpos - 11);

  const auto& tpl = prompts_.get("answer_user");
  const auto a = tpl.find("}") + 1;
  const auto label = tpl.substr(a, tpl.find("{Candidate Text}") - a);
  const std::map<std::string, double>* truth = nullptr;
  std::string candidate;
  for (auto pos = user.find(label); pos != std::string::npos && pos < qpos; pos = user.find(label, pos + 1)) {
    candidate = user.substr(pos + label.size(), qpos - pos - label.size());
    if (auto it = truth_by_candidate_.find(candidate); it != truth_by_candidate_.end()) {
      truth = &it->second;
      break;
    }
  }
  if (!truth || !truth->contains(dim)) return "No.";
  const double t = (truth->at(dim) - 1.0) / 4.0;
  const double u = 0.5 * unit_hash(question) + 0.5 * unit_hash(question + "|" + candidate);
  return u < t ? "Yes." : "No.";
}

ChatResponse RecordingBackend::complete(const ChatRequest& request) {
  auto text = responder_.reply(request);
  {
    std::lock_guard lock(mu_);
    recorded_[request_hash(request)] = text;
  }
  return {std::move(text), request.model_id, false};
}

EmbeddingVector RecordingBackend::embed(std::string_view text, std::string_view model_id) {
  return embedder_.embed(text, model_id);
}

std::string RecordingBackend::fixture_jsonl() const {
  std::lock_guard lock(mu_);
  std::string out;
  for (const auto& [hash, text] : recorded_) {
    out += json{{"request_hash", hash}, {"response_text", text}}.dump() + '\n';
  }
  return out;
}

std::size_t RecordingBackend::size() const {
  std::lock_guard lock(mu_);
  return recorded_.size();
}

}  // namespace checkeval::tools
