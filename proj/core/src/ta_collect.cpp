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

#include "checkeval/ta_collect.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <future>
#include <set>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "checkeval/errors.hpp"
#include "checkeval/json_payload.hpp"
#include "checkeval/random.hpp"
#include "checkeval/text.hpp"

namespace checkeval {

using nlohmann::json;

namespace {

std::string format_score(double score) {
  std::string s = fmt::format("{:.2f}", score);
  while (s.back() == '0') s.pop_back();
  if (s.back() == '.') s.pop_back();
  return s;
}

}  // namespace

ChatRequest build_ta_prompt(const Dimension& dimension, std::span<const Exemplar> exemplars,
                            const PromptSet& prompts) {
  if (exemplars.size() != kExemplarCount) {
    throw InvalidArgument(fmt::format("think-aloud prompt needs {} exemplars, got {}",
                                      kExemplarCount, exemplars.size()));
  }
  validate(dimension);
  std::string samples;
  for (std::size_t i = 0; i < exemplars.size(); ++i) {
    const auto& e = exemplars[i];
    if (text::is_blank(e.candidate_text)) throw InvalidArgument("exemplar candidate text is empty");
    TemplateValues v{{"Index", std::to_string(i + 1)},
                     {"Summary", e.candidate_text},
                     {"Score", format_score(e.score)}};
    if (e.source_text) {
      v["Source Text"] = *e.source_text;
      samples += prompts.render("ta_sample", v);
    } else {
      samples += prompts.render("ta_sample_nosource", v);
    }
    if (i + 1 < exemplars.size()) samples += '\n';
  }
  ChatRequest req;
  req.system_message = prompts.render("ta_system", {{"Dimension", dimension.name}});
  req.user_message = prompts.render(
      "ta_user", {{"Dimension", dimension.name}, {"Rubric", dimension.rubric}, {"Samples", samples}});
  return req;
}

std::vector<Exemplar> select_exemplars(const Dataset& dataset, const Dimension& dimension,
                                       std::uint64_t seed,
                                       const std::vector<std::string>& exclude_ids) {
  struct Scored {
    double score;
    const Sample* sample;
  };
  std::vector<Scored> scored;
  for (const auto& s : dataset.samples) {
    if (auto it = s.ground_truth.find(dimension.name); it != s.ground_truth.end()) {
      scored.push_back({it->second, &s});
    }
  }
  if (scored.size() < kExemplarCount) {
    throw InvalidArgument(fmt::format("dimension {} has {} scored samples; {} exemplars are needed",
                                      dimension.name, scored.size(), kExemplarCount));
  }
  std::sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
    if (a.score != b.score) return a.score < b.score;
    return a.sample->id < b.sample->id;
  });
  const std::set<std::string> excluded(exclude_ids.begin(), exclude_ids.end());
  Rng rng(seed);
  std::vector<Exemplar> out;
  const std::size_t n = scored.size();
  for (std::size_t q = 0; q < kExemplarCount; ++q) {
    const std::size_t lo = q * n / kExemplarCount;
    const std::size_t hi = (q + 1) * n / kExemplarCount;
    std::vector<std::size_t> band;
    for (std::size_t i = lo; i < hi; ++i) {
      if (!excluded.contains(scored[i].sample->id)) band.push_back(i);
    }
    if (band.empty()) {
      for (std::size_t i = lo; i < hi; ++i) band.push_back(i);
    }
    const auto& pick = scored[band[rng.below(band.size())]];
    out.push_back({pick.sample->source_text, pick.sample->candidate_text, pick.score});
  }
  return out;
}

std::vector<std::string> considerations_from_payload(const json& payload) {
  std::vector<std::string> out;
  auto take = [&](const json& v) {
    if (!v.is_string()) throw ParseError("consideration is not a string", payload.dump());
    if (!text::is_blank(v.get_ref<const std::string&>())) out.push_back(v.get<std::string>());
  };
  if (payload.is_array()) {
    for (const auto& v : payload) take(v);
  } else if (payload.is_object()) {
    // Numeric keys sort numerically; any others follow in key order.
    std::vector<std::pair<std::pair<bool, long long>, std::string>> keys;
    for (const auto& item : payload.items()) {
      const std::string k = item.key();
      long long idx = 0;
      const auto t = text::trim(k);
      auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), idx);
      const bool numeric = ec == std::errc{} && p == t.data() + t.size();
      keys.push_back({{!numeric, numeric ? idx : 0}, k});
    }
    std::sort(keys.begin(), keys.end());
    for (const auto& [_, k] : keys) take(payload.at(k));
  } else {
    throw ParseError("think-aloud reply is neither an object nor a list", payload.dump());
  }
  if (out.empty()) throw ParseError("think-aloud reply holds no considerations", payload.dump());
  return out;
}

CollectionResult collect_llm_attributes(const Gateway& gateway,
                                        std::span<const std::string> model_ids,
                                        const Dimension& dimension,
                                        std::span<const Exemplar> exemplars,
                                        const PromptSet& prompts, const CollectOptions& options) {
  const ChatRequest base = build_ta_prompt(dimension, exemplars, prompts);
  struct Outcome {
    std::vector<std::string> texts;
    std::optional<CollectionError> error;
  };
  std::vector<std::future<Outcome>> futures;
  for (const auto& model : model_ids) {
    futures.push_back(std::async(std::launch::async, [&, model]() {
      ChatRequest req = base;
      req.model_id = model;
      req.temperature = options.temperature;
      req.max_output_tokens = options.max_output_tokens;
      Outcome o;
      std::string raw;
      try {
        raw = gateway.complete(req).text;
        o.texts = considerations_from_payload(parse_json_payload(raw));
      } catch (const Error& e) {
        o.error = CollectionError{model, e.what(), raw};
      }
      return o;
    }));
  }
  CollectionResult result;
  for (std::size_t m = 0; m < futures.size(); ++m) {
    auto o = futures[m].get();
    if (o.error) {
      spdlog::warn("think-aloud collection failed for {}: {}", model_ids[m], o.error->message);
      result.errors.push_back(std::move(*o.error));
      continue;
    }
    for (auto& t : o.texts) {
      result.attributes.push_back(
          Attribute{std::move(t), dimension.name, {SourceKind::Llm, model_ids[m]}, {}});
    }
  }
  return result;
}

HumanIngestResult ingest_human_attributes(const std::filesystem::path& path,
                                          const std::vector<Dimension>& known_dimensions) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open human attribute file " + path.string());
  HumanIngestResult result;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (text::is_blank(line)) continue;
    const json j = json::parse(line, nullptr, false);
    auto fail = [&](std::string id, std::string msg) {
      result.errors.push_back({lineno, std::move(id), std::move(msg)});
    };
    if (j.is_discarded() || !j.is_object()) {
      fail("", "not a JSON object");
      continue;
    }
    auto field = [&](const char* key) -> std::string {
      return j.contains(key) && j[key].is_string() ? j[key].get<std::string>() : std::string{};
    };
    const std::string participant = field("participant_id");
    const std::string dim = field("dimension");
    const std::string txt = field("text");
    if (text::is_blank(participant)) {
      fail("", "missing participant_id");
      continue;
    }
    const auto known = std::find_if(known_dimensions.begin(), known_dimensions.end(),
                                    [&](const Dimension& d) {
                                      return text::match_key(d.name) == text::match_key(dim);
                                    });
    if (known == known_dimensions.end()) {
      fail(participant, "unknown dimension '" + dim + "'");
      continue;
    }
    if (text::is_blank(txt)) {
      fail(participant, "empty attribute text");
      continue;
    }
    result.attributes.push_back(
        Attribute{text::nfc(txt), known->name, {SourceKind::Human, participant}, {}});
  }
  return result;
}

std::vector<Attribute> assemble_condition(const ConditionId& condition,
                                          std::span<const Attribute> human_pool,
                                          std::span<const Attribute> llm_pool) {
  using K = ConditionId::Kind;
  std::vector<Attribute> out;
  auto add_all = [&](std::span<const Attribute> pool, SourceKind expected) {
    for (const auto& a : pool) {
      if (a.source.kind != expected) {
        throw InvalidArgument("attribute pool mixes human and LLM sources");
      }
      out.push_back(a);
    }
  };
  auto add_participant = [&](std::span<const Attribute> pool) {
    for (const auto& a : pool) {
      if (a.source.participant_id == condition.participant_id()) out.push_back(a);
    }
    if (out.empty()) {
      throw InvalidArgument("no attributes from participant '" + condition.participant_id() + "'");
    }
  };
  switch (condition.kind()) {
    case K::SingleLlm: add_participant(llm_pool); break;
    case K::SingleHuman: add_participant(human_pool); break;
    case K::MultipleLlms: add_all(llm_pool, SourceKind::Llm); break;
    case K::MultipleHumans: add_all(human_pool, SourceKind::Human); break;
    case K::Combination:
      add_all(llm_pool, SourceKind::Llm);
      add_all(human_pool, SourceKind::Human);
      break;
  }
  for (auto& a : out) a.add_condition(condition);
  return out;
}

std::vector<Attribute> deduplicate(std::vector<Attribute> attributes) {
  std::vector<Attribute> out;
  std::map<std::pair<std::string, std::string>, std::size_t> first;
  for (auto& a : attributes) {
    auto [it, fresh] = first.emplace(std::make_pair(a.dimension, a.text), out.size());
    if (fresh) {
      out.push_back(std::move(a));
    } else {
      for (const auto& c : a.condition_tags) out[it->second].add_condition(c);
    }
  }
  return out;
}

}  // namespace checkeval
