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
#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "checkeval/dataset.hpp"
#include "checkeval/errors.hpp"
#include "checkeval/gateway.hpp"
#include "checkeval/model.hpp"
#include "checkeval/prompt.hpp"

namespace checkeval {

enum class Verdict { Yes, No, Unparseable };

struct AnswerOutcome {
  Verdict verdict = Verdict::Unparseable;
  std::string raw_text;
};

/// The first "yes" or "no" token, case-insensitive; Unparseable otherwise.
Verdict parse_verdict(std::string_view reply);

struct SampleFailure {
  std::string sample_id;
  std::string error;
};

struct RunReport {
  std::size_t total = 0;
  std::size_t succeeded = 0;
  std::vector<SampleFailure> failed;
  std::size_t unparseable_count = 0;
};

nlohmann::json run_report_to_json(const RunReport& report);

/// Too many samples failed; the report lists them.
class EvaluationAborted : public EvaluationError {
 public:
  EvaluationAborted(const std::string& what, RunReport report)
      : EvaluationError(what), report_(std::move(report)) {}
  const RunReport& report() const noexcept { return report_; }

 private:
  RunReport report_;
};

struct EvaluatorOptions {
  std::string model_id = "gpt-4";
  double temperature = 0.0;
  int max_output_tokens = 16;
  /// Abort when more than this fraction of samples fail.
  double max_failure_fraction = 0.05;
  int workers = 4;
};

class Evaluator {
 public:
  Evaluator(const Gateway& gateway, PromptSet prompts, EvaluatorOptions options);

  ChatRequest answer_request(const Sample& sample, const std::string& question,
                             const Dimension& dimension) const;

  /// Transport and provider errors propagate; unusable replies become Unparseable.
  AnswerOutcome answer_question(const Sample& sample, const std::string& question,
                                const Dimension& dimension) const;

  /// Unparseable answers are left out of both the yes-count and the denominator.
  /// EvaluationError if nothing parsed.
  EvaluationRecord score_sample(const Sample& sample, const Checklist& checklist,
                                const Dimension& dimension) const;

  struct DatasetResult {
    std::vector<EvaluationRecord> records;  // sorted by sample id
    RunReport report;
  };

  using RecordSink = std::function<void(const EvaluationRecord&)>;

  /// Answers all (sample, question) pairs concurrently. `on_record` sees each
  /// finished sample as it completes, from one thread at a time.
  DatasetResult evaluate_dataset(const Dataset& dataset, const Checklist& checklist,
                                 const Dimension& dimension,
                                 const RecordSink& on_record = {}) const;

 private:
  EvaluationRecord aggregate(const Sample& sample, const Checklist& checklist,
                             const std::vector<AnswerOutcome>& outcomes) const;

  const Gateway& gateway_;
  PromptSet prompts_;
  EvaluatorOptions options_;
};

}  // namespace checkeval
