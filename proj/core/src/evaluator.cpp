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

#include "checkeval/evaluator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "checkeval/text.hpp"

namespace checkeval {

using nlohmann::json;

Verdict parse_verdict(std::string_view reply) {
  for (const auto& token : text::tokenize(reply)) {
    if (token == "yes") return Verdict::Yes;
    if (token == "no") return Verdict::No;
  }
  return Verdict::Unparseable;
}

json run_report_to_json(const RunReport& report) {
  json failed = json::array();
  for (const auto& f : report.failed) failed.push_back({{"sample_id", f.sample_id}, {"error", f.error}});
  return {{"total", report.total},
          {"succeeded", report.succeeded},
          {"failed", failed},
          {"unparseable_count", report.unparseable_count}};
}

Evaluator::Evaluator(const Gateway& gateway, PromptSet prompts, EvaluatorOptions options)
    : gateway_(gateway), prompts_(std::move(prompts)), options_(std::move(options)) {
  if (text::is_blank(options_.model_id)) throw InvalidArgument("evaluator model id is empty");
  if (!(options_.max_failure_fraction >= 0.0 && options_.max_failure_fraction <= 1.0)) {
    throw InvalidArgument("max_failure_fraction must lie in [0, 1]");
  }
}

ChatRequest Evaluator::answer_request(const Sample& sample, const std::string& question,
                                      const Dimension& dimension) const {
  if (text::is_blank(sample.candidate_text)) {
    throw InvalidArgument("sample '" + sample.id + "' has empty candidate text");
  }
  std::string source_block;
  if (sample.source_text) {
    source_block = prompts_.render("answer_source", {{"Source Text", *sample.source_text}}) + "\n";
  }
  ChatRequest req;
  req.model_id = options_.model_id;
  req.system_message = prompts_.render("answer_system", {{"Dimension", dimension.name}});
  req.user_message = prompts_.render("answer_user", {{"Source Block", source_block},
                                                     {"Candidate Text", sample.candidate_text},
                                                     {"Question", question}});
  req.temperature = options_.temperature;
  req.max_output_tokens = options_.max_output_tokens;
  return req;
}

AnswerOutcome Evaluator::answer_question(const Sample& sample, const std::string& question,
                                         const Dimension& dimension) const {
  auto reply = gateway_.complete(answer_request(sample, question, dimension));
  return {parse_verdict(reply.text), std::move(reply.text)};
}

EvaluationRecord Evaluator::aggregate(const Sample& sample, const Checklist& checklist,
                                      const std::vector<AnswerOutcome>& outcomes) const {
  std::vector<bool> answers;
  std::vector<std::size_t> unparseable;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    switch (outcomes[i].verdict) {
      case Verdict::Yes: answers.push_back(true); break;
      case Verdict::No: answers.push_back(false); break;
      case Verdict::Unparseable:
        unparseable.push_back(i);
        spdlog::debug("unparseable answer for {} question {}: {}", sample.id, i, outcomes[i].raw_text);
        break;
    }
  }
  if (answers.empty()) {
    throw EvaluationError(fmt::format("no parseable answer for sample '{}' ({} questions)", sample.id,
                                      outcomes.size()));
  }
  return make_record(sample.id, checklist.dimension, std::move(answers), std::move(unparseable));
}

EvaluationRecord Evaluator::score_sample(const Sample& sample, const Checklist& checklist,
                                         const Dimension& dimension) const {
  if (checklist.questions.empty()) throw InvalidArgument("checklist has no questions");
  std::vector<AnswerOutcome> outcomes;
  outcomes.reserve(checklist.questions.size());
  for (const auto& q : checklist.questions) outcomes.push_back(answer_question(sample, q.text, dimension));
  return aggregate(sample, checklist, outcomes);
}

Evaluator::DatasetResult Evaluator::evaluate_dataset(const Dataset& dataset, const Checklist& checklist,
                                                     const Dimension& dimension,
                                                     const RecordSink& on_record) const {
  if (!dataset.has_dimension(dimension.name)) {
    throw InvalidArgument("dataset '" + dataset.name + "' has no dimension '" + dimension.name + "'");
  }
  if (checklist.questions.empty()) throw InvalidArgument("checklist has no questions");

  const std::size_t n_samples = dataset.samples.size();
  const std::size_t n_questions = checklist.questions.size();
  struct SampleState {
    std::vector<AnswerOutcome> outcomes;
    std::size_t remaining = 0;
    std::optional<std::string> error;
    bool answered = true;
    std::optional<EvaluationRecord> record;
  };
  std::vector<SampleState> state(n_samples);
  for (auto& s : state) {
    s.outcomes.resize(n_questions);
    s.remaining = n_questions;
  }

  std::mutex mu;
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t item = next.fetch_add(1);
      if (item >= n_samples * n_questions) return;
      const std::size_t si = item / n_questions;
      const std::size_t qi = item % n_questions;
      const Sample& sample = dataset.samples[si];
      AnswerOutcome outcome;
      std::optional<std::string> error;
      try {
        outcome = answer_question(sample, checklist.questions[qi].text, dimension);
      } catch (const Error& e) {
        error = e.what();
      }
      std::lock_guard lock(mu);
      auto& st = state[si];
      st.outcomes[qi] = std::move(outcome);
      if (error) {
        st.answered = false;
        if (!st.error) st.error = std::move(error);
      }
      if (--st.remaining > 0) continue;
      if (!st.error) {
        try {
          st.record = aggregate(sample, checklist, st.outcomes);
          if (on_record) on_record(*st.record);
        } catch (const EvaluationError& e) {
          st.error = e.what();
        }
      }
    }
  };
  const auto n_workers = static_cast<std::size_t>(std::max(1, options_.workers));
  std::vector<std::jthread> threads;
  for (std::size_t i = 1; i < std::min(n_workers, n_samples * n_questions); ++i) threads.emplace_back(worker);
  worker();
  threads.clear();

  DatasetResult result;
  result.report.total = n_samples;
  for (std::size_t i = 0; i < n_samples; ++i) {
    auto& st = state[i];
    if (st.answered) {
      for (const auto& o : st.outcomes) result.report.unparseable_count += o.verdict == Verdict::Unparseable;
    }
    if (st.record) {
      result.records.push_back(std::move(*st.record));
    } else {
      result.report.failed.push_back({dataset.samples[i].id, st.error.value_or("unknown failure")});
    }
  }
  result.report.succeeded = result.records.size();
  std::sort(result.records.begin(), result.records.end(),
            [](const auto& a, const auto& b) { return a.sample_id < b.sample_id; });
  std::sort(result.report.failed.begin(), result.report.failed.end(),
            [](const auto& a, const auto& b) { return a.sample_id < b.sample_id; });

  const double allowed = options_.max_failure_fraction * static_cast<double>(n_samples);
  if (static_cast<double>(result.report.failed.size()) > allowed) {
    throw EvaluationAborted(fmt::format("{} of {} samples failed for {}", result.report.failed.size(),
                                        n_samples, dimension.name),
                            result.report);
  }
  if (!result.report.failed.empty()) {
    spdlog::warn("{} of {} samples failed for {}", result.report.failed.size(), n_samples, dimension.name);
  }
  return result;
}

}  // namespace checkeval
