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

#include "checkeval/config.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <toml.hpp>

#include "checkeval/dataset.hpp"
#include "checkeval/errors.hpp"
#include "checkeval/json_io.hpp"
#include "checkeval/text.hpp"

namespace checkeval {

using nlohmann::json;

std::string to_string(DatasetKind kind) { return kind == DatasetKind::SummEval ? "summeval" : "ellipse"; }

std::string to_string(BackendKind kind) { return kind == BackendKind::Mock ? "mock" : "live"; }

BackendKind parse_backend_kind(std::string_view text) {
  if (text == "mock") return BackendKind::Mock;
  if (text == "live") return BackendKind::Live;
  throw ConfigError("unknown backend '" + std::string(text) + "' (expected mock or live)");
}

namespace {

DatasetKind parse_dataset_kind(std::string_view text) {
  const auto k = text::match_key(text);
  if (k == "summeval") return DatasetKind::SummEval;
  if (k == "ellipse") return DatasetKind::Ellipse;
  throw ConfigError("unknown dataset kind '" + std::string(text) + "'");
}

json toml_to_json(const toml::node& node) {
  if (const auto* t = node.as_table()) {
    json j = json::object();
    for (const auto& [k, v] : *t) j[std::string(k.str())] = toml_to_json(v);
    return j;
  }
  if (const auto* a = node.as_array()) {
    json j = json::array();
    for (const auto& v : *a) j.push_back(toml_to_json(v));
    return j;
  }
  if (const auto* v = node.as_string()) return v->get();
  if (const auto* v = node.as_integer()) return v->get();
  if (const auto* v = node.as_floating_point()) return v->get();
  if (const auto* v = node.as_boolean()) return v->get();
  std::ostringstream os;
  node.visit([&](const auto& v) {
    if constexpr (toml::is_date<decltype(v)> || toml::is_time<decltype(v)> ||
                  toml::is_date_time<decltype(v)>) {
      os << v;
    }
  });
  return os.str();
}

/// Field reader that rejects unknown keys and wrongly typed values.
class Reader {
 public:
  Reader(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) throw ConfigError(where_ + " must be a table");
  }

  const json* find(const char* key) {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() || it->is_null() ? nullptr : &*it;
  }

  template <typename T>
  void get(const char* key, T& out) {
    if (const json* v = find(key)) {
      try {
        out = v->get<T>();
      } catch (const json::exception&) {
        throw ConfigError(fmt::format("{}.{} has the wrong type", where_, key));
      }
    }
  }

  void path(const char* key, std::filesystem::path& out) {
    std::string s;
    get(key, s);
    if (!s.empty()) out = s;
  }

  void optional_path(const char* key, std::optional<std::filesystem::path>& out) {
    std::string s;
    get(key, s);
    if (!s.empty()) out = std::filesystem::path(s);
  }

  void number(const char* key, double& out) {
    if (const json* v = find(key)) {
      if (!v->is_number()) throw ConfigError(fmt::format("{}.{} must be a number", where_, key));
      out = v->get<double>();
    }
  }

  void finish() const {
    for (const auto& item : j_.items()) {
      const std::string k = item.key();
      if (!seen_.contains(k)) throw ConfigError(fmt::format("unknown key {}.{}", where_, k));
    }
  }

  const std::string& where() const { return where_; }

 private:
  const json& j_;
  std::string where_;
  std::set<std::string, std::less<>> seen_;
};

ConditionId condition_from(const json& v, const std::string& where) {
  if (!v.is_string()) throw ConfigError(where + " must be a string");
  try {
    return ConditionId::parse(v.get<std::string>());
  } catch (const InvalidArgument& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

}  // namespace

std::filesystem::path PipelineConfig::resolve(const std::filesystem::path& p) const {
  if (p.empty() || p.is_absolute()) return p;
  return (base_dir / p).lexically_normal();
}

std::string PipelineConfig::effective_prompt_set() const {
  if (!prompt_set.empty()) return prompt_set;
  return dataset.kind == DatasetKind::SummEval ? "news-summary" : "essay";
}

std::vector<Dimension> PipelineConfig::resolved_dimensions() const {
  const auto available =
      dataset.kind == DatasetKind::SummEval ? summeval_dimensions() : ellipse_dimensions();
  std::vector<Dimension> out;
  if (dimensions.empty()) {
    out = available;
  } else {
    for (const auto& name : dimensions) {
      auto it = std::find_if(available.begin(), available.end(),
                             [&](const Dimension& d) { return d.name == name; });
      if (it == available.end()) {
        throw ConfigError(fmt::format("dimension '{}' is not part of {}", name, to_string(dataset.kind)));
      }
      out.push_back(*it);
    }
  }
  for (auto& d : out) {
    if (auto it = rubric_overrides.find(d.name); it != rubric_overrides.end()) d.rubric = it->second;
  }
  return out;
}

PipelineConfig config_from_json(const json& j, const std::filesystem::path& base_dir) {
  PipelineConfig c;
  c.base_dir = base_dir;
  Reader top(j, "config");

  if (const json* d = top.find("dataset")) {
    Reader r(*d, "dataset");
    std::string kind = "summeval";
    r.get("kind", kind);
    c.dataset.kind = parse_dataset_kind(kind);
    r.path("path", c.dataset.path);
    r.finish();
  } else {
    throw ConfigError("config needs a [dataset] table");
  }
  top.get("dimensions", c.dimensions);
  top.get("rubric_overrides", c.rubric_overrides);
  top.number("sample_fraction", c.sample_fraction);
  top.get("seed", c.seed);
  top.get("prompt_set", c.prompt_set);
  top.optional_path("prompt_dir", c.prompt_dir);

  if (const json* t = top.find("ta")) {
    Reader r(*t, "ta");
    r.get("llm_model_ids", c.ta.llm_model_ids);
    r.optional_path("human_attributes_path", c.ta.human_attributes_path);
    if (const json* conds = r.find("conditions")) {
      if (!conds->is_array()) throw ConfigError("ta.conditions must be a list");
      for (const auto& v : *conds) c.ta.conditions.push_back(condition_from(v, "ta.conditions"));
    }
    if (const json* temp = r.find("temperature")) {
      if (!temp->is_number()) throw ConfigError("ta.temperature must be a number");
      c.ta.temperature = temp->get<double>();
    }
    r.finish();
  }
  if (const json* t = top.find("construction")) {
    Reader r(*t, "construction");
    r.get("model_id", c.construction.model_id);
    r.get("max_components", c.construction.max_components);
    r.number("temperature", c.construction.temperature);
    r.finish();
  }
  if (const json* t = top.find("evaluation")) {
    Reader r(*t, "evaluation");
    r.get("model_id", c.evaluation.model_id);
    r.number("temperature", c.evaluation.temperature);
    r.number("max_failure_fraction", c.evaluation.max_failure_fraction);
    r.finish();
  }
  if (const json* t = top.find("analysis")) {
    Reader r(*t, "analysis");
    if (const json* pairs = r.find("fisher_pairs")) {
      if (!pairs->is_array()) throw ConfigError("analysis.fisher_pairs must be a list");
      for (const auto& p : *pairs) {
        if (!p.is_array() || p.size() != 2) {
          throw ConfigError("analysis.fisher_pairs entries must be two-element lists");
        }
        c.analysis.fisher_pairs.emplace_back(condition_from(p[0], "analysis.fisher_pairs"),
                                             condition_from(p[1], "analysis.fisher_pairs"));
      }
    }
    r.get("lda_k", c.analysis.lda_k);
    r.get("lda_seed", c.analysis.lda_seed);
    r.get("lda_iterations", c.analysis.lda_iterations);
    r.get("embedding_model", c.analysis.embedding_model);
    r.finish();
  }
  if (const json* t = top.find("gateway")) {
    Reader r(*t, "gateway");
    std::string backend = "mock";
    r.get("backend", backend);
    c.gateway.backend = parse_backend_kind(backend);
    r.path("cache_dir", c.gateway.cache_dir);
    r.get("max_inflight", c.gateway.max_inflight);
    r.get("max_retries", c.gateway.max_retries);
    r.optional_path("mock_fixture", c.gateway.mock_fixture);
    r.finish();
  }
  top.finish();
  return c;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::string content;
  try {
    content = read_text_file(path);
  } catch (const IoError& e) {
    throw ConfigError(e.what());
  }
  json j;
  if (path.extension() == ".json") {
    j = json::parse(content, nullptr, false);
    if (j.is_discarded()) throw ConfigError(path.string() + " is not valid JSON");
  } else {
    try {
      j = toml_to_json(toml::parse(content, path.string()));
    } catch (const toml::parse_error& e) {
      const auto& where = e.source().begin;
      throw ConfigError(fmt::format("{}:{}:{}: {}", path.string(), where.line, where.column,
                                    e.description()));
    }
  }
  const auto dir = std::filesystem::absolute(path).parent_path();
  return config_from_json(j, dir);
}

json config_to_json(const PipelineConfig& c) {
  auto opt_path = [](const std::optional<std::filesystem::path>& p) -> json {
    return p ? json(p->generic_string()) : json(nullptr);
  };
  json conditions = json::array();
  for (const auto& cond : c.ta.conditions) conditions.push_back(cond.to_string());
  json pairs = json::array();
  for (const auto& [a, b] : c.analysis.fisher_pairs) pairs.push_back({a.to_string(), b.to_string()});
  return {
      {"dataset", {{"kind", to_string(c.dataset.kind)}, {"path", c.dataset.path.generic_string()}}},
      {"dimensions", c.dimensions},
      {"rubric_overrides", c.rubric_overrides},
      {"sample_fraction", c.sample_fraction},
      {"seed", c.seed},
      {"prompt_set", c.prompt_set},
      {"prompt_dir", opt_path(c.prompt_dir)},
      {"ta",
       {{"llm_model_ids", c.ta.llm_model_ids},
        {"human_attributes_path", opt_path(c.ta.human_attributes_path)},
        {"conditions", conditions},
        {"temperature", c.ta.temperature ? json(*c.ta.temperature) : json(nullptr)}}},
      {"construction",
       {{"model_id", c.construction.model_id},
        {"max_components", c.construction.max_components},
        {"temperature", c.construction.temperature}}},
      {"evaluation",
       {{"model_id", c.evaluation.model_id},
        {"temperature", c.evaluation.temperature},
        {"max_failure_fraction", c.evaluation.max_failure_fraction}}},
      {"analysis",
       {{"fisher_pairs", pairs},
        {"lda_k", c.analysis.lda_k},
        {"lda_seed", c.analysis.lda_seed},
        {"lda_iterations", c.analysis.lda_iterations},
        {"embedding_model", c.analysis.embedding_model}}},
      {"gateway",
       {{"backend", to_string(c.gateway.backend)},
        {"cache_dir", c.gateway.cache_dir.generic_string()},
        {"max_inflight", c.gateway.max_inflight},
        {"max_retries", c.gateway.max_retries},
        {"mock_fixture", opt_path(c.gateway.mock_fixture)}}},
  };
}

std::vector<std::string> validate_config(const PipelineConfig& c) {
  std::vector<std::string> problems;
  auto check_file = [&](const std::filesystem::path& p, const std::string& what) {
    if (p.empty()) {
      problems.push_back(what + " is not set");
    } else if (!std::filesystem::exists(c.resolve(p))) {
      problems.push_back(what + " does not exist: " + c.resolve(p).string());
    }
  };
  check_file(c.dataset.path, "dataset.path");
  if (!(c.sample_fraction > 0.0 && c.sample_fraction <= 1.0)) {
    problems.push_back("sample_fraction must lie in (0, 1]");
  }
  try {
    auto dims = c.resolved_dimensions();
    validate_dimensions(dims);
  } catch (const Error& e) {
    problems.push_back(e.what());
  }
  for (const auto& [name, _] : c.rubric_overrides) {
    if (!c.dimensions.empty() && std::find(c.dimensions.begin(), c.dimensions.end(), name) == c.dimensions.end()) {
      problems.push_back("rubric override for undeclared dimension '" + name + "'");
    }
  }
  if (c.prompt_dir) {
    check_file(*c.prompt_dir, "prompt_dir");
  } else if (c.effective_prompt_set() != "news-summary" && c.effective_prompt_set() != "essay") {
    problems.push_back("unknown prompt_set '" + c.prompt_set + "'");
  }

  if (c.ta.conditions.empty()) problems.push_back("ta.conditions is empty");
  std::set<std::string> models(c.ta.llm_model_ids.begin(), c.ta.llm_model_ids.end());
  if (models.size() != c.ta.llm_model_ids.size()) problems.push_back("ta.llm_model_ids repeats a model");
  if (c.ta.human_attributes_path) check_file(*c.ta.human_attributes_path, "ta.human_attributes_path");
  std::set<ConditionId> conditions;
  for (const auto& cond : c.ta.conditions) {
    using K = ConditionId::Kind;
    if (!conditions.insert(cond).second) problems.push_back("condition repeated: " + cond.to_string());
    const bool needs_llm = cond.kind() == K::SingleLlm || cond.kind() == K::MultipleLlms ||
                           cond.kind() == K::Combination;
    const bool needs_human = cond.kind() == K::SingleHuman || cond.kind() == K::MultipleHumans ||
                             cond.kind() == K::Combination;
    if (needs_llm && models.empty()) problems.push_back(cond.to_string() + " needs ta.llm_model_ids");
    if (needs_human && !c.ta.human_attributes_path) {
      problems.push_back(cond.to_string() + " needs ta.human_attributes_path");
    }
    if (cond.kind() == K::SingleLlm && !models.contains(cond.participant_id())) {
      problems.push_back(cond.to_string() + " names a model missing from ta.llm_model_ids");
    }
  }
  for (const auto& [a, b] : c.analysis.fisher_pairs) {
    for (const auto& cond : {a, b}) {
      if (!conditions.contains(cond)) {
        problems.push_back("fisher pair references unconfigured condition " + cond.to_string());
      }
    }
  }
  if (c.construction.max_components < 1 || c.construction.max_components > 9) {
    problems.push_back("construction.max_components must lie in [1, 9]");
  }
  if (text::is_blank(c.construction.model_id)) problems.push_back("construction.model_id is empty");
  if (text::is_blank(c.evaluation.model_id)) problems.push_back("evaluation.model_id is empty");
  if (!(c.evaluation.max_failure_fraction >= 0.0 && c.evaluation.max_failure_fraction <= 1.0)) {
    problems.push_back("evaluation.max_failure_fraction must lie in [0, 1]");
  }
  if (c.analysis.lda_k < 1) problems.push_back("analysis.lda_k must be at least 1");
  if (c.analysis.lda_iterations < 0) problems.push_back("analysis.lda_iterations must be non-negative");
  if (c.gateway.max_inflight < 1 || c.gateway.max_inflight > 64) {
    problems.push_back("gateway.max_inflight must lie in [1, 64]");
  }
  if (c.gateway.max_retries < 0) problems.push_back("gateway.max_retries must be non-negative");
  if (c.gateway.mock_fixture) check_file(*c.gateway.mock_fixture, "gateway.mock_fixture");
  return problems;
}

}  // namespace checkeval
