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

#include <map>
#include <mutex>
#include <string>
#include <string_view>

#include "checkeval/dataset.hpp"
#include "checkeval/gateway.hpp"
#include "checkeval/prompt.hpp"

namespace checkeval::tools {

/// Deterministic stand-in for every LLM stage, used to record mock fixtures.
///
/// The stage is recognised from the system message. Think-aloud replies draw
/// from a fixed bank of considerations; construction replies group
/// attributes by keyword; answers say Yes more often for samples with a
/// higher ground-truth score, so recorded runs give non-degenerate
/// correlations.
class RuleResponder {
 public:
  RuleResponder(PromptSet prompts, const Dataset& dataset);

  std::string reply(const ChatRequest& request) const;

 private:
  std::string think_aloud(const ChatRequest& request) const;
  std::string extract(const ChatRequest& request) const;
  std::string cluster(const ChatRequest& request) const;
  std::string key_questions(const ChatRequest& request) const;
  std::string sub_questions(const ChatRequest& request) const;
  std::string validate(const ChatRequest& request) const;
  std::string answer(const ChatRequest& request) const;

  PromptSet prompts_;
  std::map<std::string, std::map<std::string, double>, std::less<>> truth_by_candidate_;
};

/// Answers through a responder and remembers every exchange.
class RecordingBackend final : public ChatBackend {
 public:
  explicit RecordingBackend(const RuleResponder& responder) : responder_(responder) {}

  ChatResponse complete(const ChatRequest& request) override;
  EmbeddingVector embed(std::string_view text, std::string_view model_id) override;

  /// Fixture lines sorted by request hash.
  std::string fixture_jsonl() const;
  std::size_t size() const;

 private:
  const RuleResponder& responder_;
  MockBackend embedder_;
  mutable std::mutex mu_;
  std::map<std::string, std::string> recorded_;
};

}  // namespace checkeval::tools
