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

#include <memory>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "checkeval/errors.hpp"
#include "checkeval/gateway.hpp"
#include "checkeval/model.hpp"
#include "checkeval/prompt.hpp"

namespace checkeval {

enum class BuildStage { Extract, Cluster, KeyQuestions, SubQuestions, Validate };

std::string to_string(BuildStage stage);

struct StageResponse {
  BuildStage stage;
  ChatResponse response;
};

struct KeyQuestion {
  std::string component_label;
  std::string question;
};

struct SubQuestionGroup {
  std::string component_label;
  std::vector<std::string> questions;
};

/// Everything each construction stage produced, kept for audit.
struct ConstructionTrace {
  std::vector<Component> components;
  std::vector<KeyQuestion> key_questions;
  std::vector<SubQuestionGroup> sub_questions;
  std::vector<std::string> validated_questions;
  std::vector<StageResponse> raw_responses;
  std::vector<std::string> warnings;
};

nlohmann::json trace_to_json(const ConstructionTrace& trace);

/// A stage failed; the trace up to the failure is attached.
class ChecklistBuildFailure : public ConstructionError {
 public:
  ChecklistBuildFailure(const std::string& what, ConstructionTrace trace)
      : ConstructionError(what),
        trace_(std::make_shared<ConstructionTrace>(std::move(trace))) {}

  const ConstructionTrace& trace() const noexcept { return *trace_; }

 private:
  std::shared_ptr<const ConstructionTrace> trace_;
};

struct BuilderOptions {
  std::string model_id = "gpt-4";
  int max_components = 5;
  double temperature = 0.0;
  int max_output_tokens = 2048;
};

/// Label given to validated questions that no longer match a sub-question.
inline constexpr std::string_view kMergedLabel = "merged";

/// The five construction stages: extract, cluster, key questions,
/// sub-questions, validate. Each stage appends its raw reply and any
/// warnings to the trace it is given.
class ChecklistBuilder {
 public:
  ChecklistBuilder(const Gateway& gateway, PromptSet prompts, BuilderOptions options);

  std::vector<Component> extract_components(std::span<const Attribute> attributes,
                                            const Dimension& dimension,
                                            ConstructionTrace& trace) const;

  std::vector<Component> cluster_attributes(std::vector<Component> components,
                                            std::span<const Attribute> attributes,
                                            ConstructionTrace& trace) const;

  std::vector<KeyQuestion> generate_key_questions(std::span<const Component> components,
                                                  const Dimension& dimension,
                                                  ConstructionTrace& trace) const;

  std::vector<SubQuestionGroup> generate_sub_questions(std::span<const KeyQuestion> key_questions,
                                                       const Dimension& dimension,
                                                       ConstructionTrace& trace) const;

  std::vector<std::string> validate_questions(std::span<const std::string> sub_questions,
                                              const Dimension& dimension,
                                              ConstructionTrace& trace) const;

  struct Result {
    Checklist checklist;
    ConstructionTrace trace;
  };

  /// Runs all stages in order. Throws ChecklistBuildFailure carrying the trace.
  Result build(std::span<const Attribute> attributes, const Dimension& dimension,
               const std::string& condition) const;

  const BuilderOptions& options() const noexcept { return options_; }

 private:
  ChatResponse ask(BuildStage stage, std::string system, std::string user,
                   ConstructionTrace& trace) const;

  const Gateway& gateway_;
  PromptSet prompts_;
  BuilderOptions options_;
};

}  // namespace checkeval
