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

#include "checkeval/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <future>
#include <map>
#include <set>

#include <fmt/chrono.h>
#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "checkeval/analysis/lda.hpp"
#include "checkeval/analysis/similarity.hpp"
#include "checkeval/analysis/stats.hpp"
#include "checkeval/checklist_builder.hpp"
#include "checkeval/dataset.hpp"
#include "checkeval/evaluator.hpp"
#include "checkeval/hash.hpp"
#include "checkeval/json_io.hpp"
#include "checkeval/prompt.hpp"
#include "checkeval/ta_collect.hpp"
#include "checkeval/text.hpp"

namespace checkeval {

namespace fs = std::filesystem;
using nlohmann::json;

std::string to_string(Stage stage) {
  switch (stage) {
    case Stage::Ingest: return "ingest";
    case Stage::Collect: return "collect";
    case Stage::Build: return "build";
    case Stage::Evaluate: return "evaluate";
    case Stage::Analyze: return "analyze";
  }
  return "unknown";
}

Stage parse_stage(std::string_view name) {
  for (auto s : all_stages()) {
    if (to_string(s) == name) return s;
  }
  throw UsageError("unknown stage '" + std::string(name) + "'");
}

std::vector<Stage> all_stages() {
  return {Stage::Ingest, Stage::Collect, Stage::Build, Stage::Evaluate, Stage::Analyze};
}

std::vector<Stage> parse_stage_list(std::string_view text) {
  if (text::trim(text) == "all") return all_stages();
  std::set<Stage> picked;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto part = text::trim(text.substr(start, comma == std::string_view::npos ? text.npos : comma - start));
    if (part.empty()) throw UsageError("empty stage name in '" + std::string(text) + "'");
    picked.insert(parse_stage(part));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return {picked.begin(), picked.end()};
}

std::string config_hash(const PipelineConfig& config) {
  return sha256_hex(config_to_json(config).dump()).substr(0, 12);
}

fs::path run_directory(const PipelineConfig& config, const fs::path& out_root) {
  return out_root / ("run-" + config_hash(config));
}

fs::path manifest_path(const fs::path& run_dir, Stage stage) {
  return run_dir / to_string(stage) / "manifest.json";
}

void verify_manifest(const fs::path& run_dir, Stage stage) {
  const auto path = manifest_path(run_dir, stage);
  if (!fs::exists(path)) {
    throw UsageError(fmt::format("{} stage has not run: {} is missing", to_string(stage), path.string()));
  }
  json m;
  try {
    m = json::parse(read_text_file(path));
    for (const auto& out : m.at("outputs")) {
      const auto file = run_dir / out.at("path").get<std::string>();
      if (!fs::exists(file)) throw UsageError(fmt::format("{} lists missing output {}", path.string(), file.string()));
      if (sha256_file(file) != out.at("sha256").get<std::string>()) {
        throw UsageError(fmt::format("{} output {} changed since the stage ran", path.string(), file.string()));
      }
    }
  } catch (const json::exception& e) {
    throw UsageError(fmt::format("broken manifest {}: {}", path.string(), e.what()));
  }
}

namespace {

std::string now_utc() {
  return fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", fmt::gmtime(std::chrono::system_clock::to_time_t(
                                                 std::chrono::system_clock::now())));
}

std::string dataset_name(const PipelineConfig& c) { return to_string(c.dataset.kind); }

/// Where one (condition, dimension) pair lives inside a stage directory.
std::string pair_path(const ConditionId& condition, const Dimension& dim, std::string_view suffix) {
  return condition.slug() + "/" + dim.name + std::string(suffix);
}

struct StageWriter {
  fs::path run_dir;
  Stage stage;
  std::vector<std::string> outputs;  // relative to run_dir
  std::mutex mu;

  fs::path dir() const { return run_dir / to_string(stage); }

  void write(const std::string& rel, std::string_view content) {
    const auto path = dir() / rel;
    fs::create_directories(path.parent_path());
    write_text_file_atomic(path, content);
    std::lock_guard lock(mu);
    outputs.push_back(to_string(stage) + "/" + rel);
  }
  void write_json(const std::string& rel, const json& j) { write(rel, dump_pretty(j)); }
};

class Runner {
 public:
  Runner(const PipelineConfig& config, const RunOptions& options)
      : config_(config), options_(options), run_dir_(run_directory(config, options.out_root)) {}

  RunResult run();

 private:
  void log(const std::string& message) const {
    spdlog::info("{}", message);
    if (options_.log) options_.log(message);
  }

  void setup_backend();
  const PromptSet& prompts();
  std::string input_hash(Stage stage, json& inputs);
  bool up_to_date(Stage stage, const std::string& hash) const;
  void write_manifest(Stage stage, const std::string& hash, const json& inputs,
                      const std::string& started, const std::vector<std::string>& outputs) const;

  void ingest(StageWriter& w);
  void collect(StageWriter& w);
  void build(StageWriter& w);
  void evaluate(StageWriter& w);
  void analyze(StageWriter& w);

  Dataset load_samples(const std::string& file) const;
  std::vector<Attribute> load_pair_attributes(const ConditionId& c, const Dimension& d) const;

  const Gateway& gateway() const { return *gateway_; }

  const PipelineConfig& config_;
  const RunOptions& options_;
  fs::path run_dir_;
  std::vector<Dimension> dims_;
  std::string backend_label_;
  std::shared_ptr<ChatBackend> backend_;
  std::unique_ptr<Gateway> gateway_;
  std::optional<PromptSet> prompts_;
};

void Runner::setup_backend() {
  if (gateway_) return;
  if (options_.backend) {
    backend_ = options_.backend;
    backend_label_ = "injected";
  } else {
    const auto kind = options_.backend_override.value_or(config_.gateway.backend);
    backend_label_ = to_string(kind);
    if (kind == BackendKind::Mock) {
      if (config_.gateway.mock_fixture) {
        backend_ = MockBackend::from_fixture_file(config_.resolve(*config_.gateway.mock_fixture));
      } else {
        backend_ = std::make_shared<MockBackend>();
      }
    } else {
      try {
        backend_ = std::make_shared<HttpBackend>(HttpBackendOptions::from_environment());
      } catch (const ConfigError& e) {
        throw UsageError(e.what());
      }
    }
  }
  GatewayOptions g;
  g.cache_dir = options_.cache_dir_override.value_or(config_.resolve(config_.gateway.cache_dir));
  g.max_retries = config_.gateway.max_retries;
  g.max_inflight = config_.gateway.max_inflight;
  gateway_ = std::make_unique<Gateway>(backend_, g);
}

const PromptSet& Runner::prompts() {
  if (!prompts_) {
    prompts_ = config_.prompt_dir
                   ? PromptSet::from_directory(config_.resolve(*config_.prompt_dir), config_.effective_prompt_set())
                   : PromptSet::builtin(config_.effective_prompt_set());
  }
  return *prompts_;
}

std::string Runner::input_hash(Stage stage, json& inputs) {
  inputs = json::object();
  inputs["config"] = config_hash(config_);
  auto file = [&](const std::string& label, const fs::path& p) {
    inputs["files"][label] = sha256_file(p);
  };
  auto upstream = [&](Stage s) {
    const auto m = json::parse(read_text_file(manifest_path(run_dir_, s)));
    for (const auto& out : m.at("outputs")) inputs["upstream"][out.at("path").get<std::string>()] = out.at("sha256");
  };
  auto llm_inputs = [&]() {
    std::string all;
    for (const auto& [k, v] : prompts().templates()) all += k + '\0' + v + '\0';
    inputs["prompts"] = sha256_hex(all);
    inputs["backend"] = backend_label_;
    if (backend_label_ == "mock" && config_.gateway.mock_fixture) {
      file("mock_fixture", config_.resolve(*config_.gateway.mock_fixture));
    }
  };
  switch (stage) {
    case Stage::Ingest:
      file("dataset", config_.resolve(config_.dataset.path));
      break;
    case Stage::Collect:
      upstream(Stage::Ingest);
      if (config_.ta.human_attributes_path) file("human_attributes", config_.resolve(*config_.ta.human_attributes_path));
      llm_inputs();
      break;
    case Stage::Build:
      upstream(Stage::Collect);
      llm_inputs();
      break;
    case Stage::Evaluate:
      upstream(Stage::Ingest);
      upstream(Stage::Build);
      llm_inputs();
      break;
    case Stage::Analyze:
      upstream(Stage::Ingest);
      upstream(Stage::Collect);
      upstream(Stage::Evaluate);
      inputs["backend"] = backend_label_;
      break;
  }
  inputs["stage"] = to_string(stage);
  return sha256_hex(inputs.dump());
}

bool Runner::up_to_date(Stage stage, const std::string& hash) const {
  const auto path = manifest_path(run_dir_, stage);
  if (!fs::exists(path)) return false;
  try {
    const auto m = json::parse(read_text_file(path));
    if (m.at("input_hash").get<std::string>() != hash) return false;
    verify_manifest(run_dir_, stage);
    return true;
  } catch (const std::exception&) {
    return false;
  }
}

void Runner::write_manifest(Stage stage, const std::string& hash, const json& inputs, const std::string& started,
                            const std::vector<std::string>& outputs) const {
  auto sorted = outputs;
  std::sort(sorted.begin(), sorted.end());
  json outs = json::array();
  for (const auto& rel : sorted) outs.push_back({{"path", rel}, {"sha256", sha256_file(run_dir_ / rel)}});
  const json m = {{"stage", to_string(stage)}, {"input_hash", hash},      {"inputs", inputs},
                  {"config", config_to_json(config_)}, {"outputs", outs}, {"started_at", started},
                  {"finished_at", now_utc()}};
  write_text_file_atomic(manifest_path(run_dir_, stage), dump_pretty(m));
}

RunResult Runner::run() {
  if (auto problems = validate_config(config_); !problems.empty()) {
    std::string all;
    for (const auto& p : problems) all += "\n  " + p;
    throw UsageError("invalid config:" + all);
  }
  dims_ = config_.resolved_dimensions();
  std::vector<Stage> stages = options_.stages;
  std::sort(stages.begin(), stages.end());
  stages.erase(std::unique(stages.begin(), stages.end()), stages.end());
  if (stages.empty()) throw UsageError("no stages requested");

  static const std::map<Stage, std::vector<Stage>> kNeeds = {
      {Stage::Ingest, {}},
      {Stage::Collect, {Stage::Ingest}},
      {Stage::Build, {Stage::Collect}},
      {Stage::Evaluate, {Stage::Ingest, Stage::Build}},
      {Stage::Analyze, {Stage::Ingest, Stage::Collect, Stage::Evaluate}},
  };
  const std::set<Stage> requested(stages.begin(), stages.end());
  for (auto s : stages) {
    for (auto dep : kNeeds.at(s)) {
      if (requested.contains(dep)) continue;
      try {
        verify_manifest(run_dir_, dep);
      } catch (const UsageError& e) {
        throw UsageError(fmt::format("{} needs the {} stage: {}", to_string(s), to_string(dep), e.what()));
      }
    }
  }

  fs::create_directories(run_dir_);
  write_text_file_atomic(run_dir_ / "config.json", dump_pretty(config_to_json(config_)));
  setup_backend();

  RunResult result;
  result.run_dir = run_dir_;
  for (auto s : stages) {
    json inputs;
    const auto hash = input_hash(s, inputs);
    if (up_to_date(s, hash)) {
      log(to_string(s) + ": up-to-date");
      result.stages.push_back({s, true});
      continue;
    }
    const auto started = now_utc();
    log(to_string(s) + ": running");
    StageWriter w{run_dir_, s, {}, {}};
    fs::remove(manifest_path(run_dir_, s));
    try {
      switch (s) {
        case Stage::Ingest: ingest(w); break;
        case Stage::Collect: collect(w); break;
        case Stage::Build: build(w); break;
        case Stage::Evaluate: evaluate(w); break;
        case Stage::Analyze: analyze(w); break;
      }
    } catch (const StageFailure&) {
      throw;
    } catch (const UsageError&) {
      throw;
    } catch (const std::exception& e) {
      throw StageFailure(s, to_string(s) + " failed: " + e.what());
    }
    write_manifest(s, hash, inputs, started, w.outputs);
    log(to_string(s) + ": done");
    result.stages.push_back({s, false});
  }
  return result;
}

// ---------------------------------------------------------------------------
// ingest

void Runner::ingest(StageWriter& w) {
  const auto path = config_.resolve(config_.dataset.path);
  auto loaded = config_.dataset.kind == DatasetKind::SummEval ? load_summeval(path) : load_ellipse(path);
  if (loaded.report.parsed == 0) throw StageFailure(Stage::Ingest, "no valid records in " + path.string());
  Dataset dataset = std::move(loaded.dataset);
  dataset.dimensions = dims_;
  for (auto& s : dataset.samples) {
    std::map<std::string, double> kept;
    for (const auto& d : dims_) kept[d.name] = s.ground_truth.at(d.name);
    s.ground_truth = std::move(kept);
  }
  dataset.validate();
  const Dataset subset = stratified_sample(dataset, config_.sample_fraction, config_.seed);

  w.write("dataset.jsonl", to_jsonl(std::vector<json>(dataset.samples.begin(), dataset.samples.end())));
  w.write("subset.jsonl", to_jsonl(std::vector<json>(subset.samples.begin(), subset.samples.end())));

  json errors = json::array();
  for (const auto& e : loaded.report.errors) errors.push_back({{"line", e.line}, {"id", e.id}, {"message", e.message}});
  w.write_json("load_report.json", {{"path", config_.dataset.path.generic_string()},
                                    {"parsed", loaded.report.parsed},
                                    {"skipped", loaded.report.skipped},
                                    {"subset_size", subset.samples.size()},
                                    {"errors", errors}});

  std::string csv = "dimension,bin_low,bin_high,full_count,full_share,subset_count,subset_share\n";
  for (const auto& d : dims_) {
    const auto full = histogram(dataset, d.name);
    const auto sub = histogram(subset, d.name);
    for (std::size_t b = 0; b < kScoreBins; ++b) {
      csv += fmt::format("{},{:.1f},{:.1f},{},{:.6f},{},{:.6f}\n", d.name, 1.0 + 0.5 * b, 1.5 + 0.5 * b, full[b],
                         static_cast<double>(full[b]) / dataset.samples.size(), sub[b],
                         static_cast<double>(sub[b]) / subset.samples.size());
    }
  }
  w.write("distribution.csv", csv);
  log(fmt::format("ingest: {} samples loaded, {} skipped, subset of {}", loaded.report.parsed,
                  loaded.report.skipped, subset.samples.size()));
}

Dataset Runner::load_samples(const std::string& file) const {
  Dataset d;
  d.name = dataset_name(config_);
  d.dimensions = dims_;
  d.samples = read_jsonl_as<Sample>(run_dir_ / "ingest" / file);
  return d;
}

// ---------------------------------------------------------------------------
// collect

void Runner::collect(StageWriter& w) {
  using K = ConditionId::Kind;
  const Dataset dataset = load_samples("dataset.jsonl");
  const Dataset subset = load_samples("subset.jsonl");
  std::vector<std::string> subset_ids;
  for (const auto& s : subset.samples) subset_ids.push_back(s.id);

  const bool need_llm = std::any_of(config_.ta.conditions.begin(), config_.ta.conditions.end(), [](const ConditionId& c) {
    return c.kind() == K::SingleLlm || c.kind() == K::MultipleLlms || c.kind() == K::Combination;
  });

  json errors = {{"llm", json::array()}, {"human", json::array()}, {"conditions", json::array()}};
  json exemplars_json = json::object();
  std::vector<Attribute> llm_pool, human_pool;

  if (need_llm) {
    CollectOptions opts;
    opts.temperature = config_.ta.temperature;
    for (const auto& d : dims_) {
      const auto exemplars = select_exemplars(dataset, d, config_.seed, subset_ids);
      json ex = json::array();
      for (const auto& e : exemplars) {
        ex.push_back({{"source_text", e.source_text ? json(*e.source_text) : json(nullptr)},
                      {"candidate_text", e.candidate_text},
                      {"score", e.score}});
      }
      exemplars_json[d.name] = ex;
      auto got = collect_llm_attributes(gateway(), config_.ta.llm_model_ids, d, exemplars, prompts(), opts);
      for (const auto& e : got.errors) {
        errors["llm"].push_back({{"dimension", d.name}, {"model_id", e.model_id}, {"message", e.message},
                                 {"raw_text", e.raw_text}});
      }
      llm_pool.insert(llm_pool.end(), got.attributes.begin(), got.attributes.end());
    }
  }
  if (config_.ta.human_attributes_path) {
    auto got = ingest_human_attributes(config_.resolve(*config_.ta.human_attributes_path), dims_);
    for (const auto& e : got.errors) {
      errors["human"].push_back({{"line", e.line}, {"id", e.id}, {"message", e.message}});
    }
    human_pool = std::move(got.attributes);
  }
  w.write("exemplars.json", dump_pretty(exemplars_json));
  w.write("pools/llm.jsonl", to_jsonl(std::vector<json>(llm_pool.begin(), llm_pool.end())));
  w.write("pools/human.jsonl", to_jsonl(std::vector<json>(human_pool.begin(), human_pool.end())));

  std::size_t failures = 0;
  for (const auto& c : config_.ta.conditions) {
    for (const auto& d : dims_) {
      std::vector<Attribute> human, llm;
      std::copy_if(human_pool.begin(), human_pool.end(), std::back_inserter(human),
                   [&](const Attribute& a) { return a.dimension == d.name; });
      std::copy_if(llm_pool.begin(), llm_pool.end(), std::back_inserter(llm),
                   [&](const Attribute& a) { return a.dimension == d.name; });
      std::vector<Attribute> attrs;
      try {
        attrs = deduplicate(assemble_condition(c, human, llm));
      } catch (const InvalidArgument& e) {
        errors["conditions"].push_back({{"condition", c.to_string()}, {"dimension", d.name}, {"message", e.what()}});
      }
      if (attrs.empty()) {
        ++failures;
        if (errors["conditions"].empty() || errors["conditions"].back()["dimension"] != d.name ||
            errors["conditions"].back()["condition"] != c.to_string()) {
          errors["conditions"].push_back(
              {{"condition", c.to_string()}, {"dimension", d.name}, {"message", "no attributes"}});
        }
        continue;
      }
      w.write(pair_path(c, d, ".jsonl"), to_jsonl(std::vector<json>(attrs.begin(), attrs.end())));
    }
  }
  w.write("errors.json", dump_pretty(errors));
  log(fmt::format("collect: {} LLM and {} human attributes", llm_pool.size(), human_pool.size()));
  if (failures > 0) {
    throw StageFailure(Stage::Collect,
                       fmt::format("collect failed: {} condition/dimension pairs have no attributes (see {})",
                                   failures, (w.dir() / "errors.json").string()));
  }
}

std::vector<Attribute> Runner::load_pair_attributes(const ConditionId& c, const Dimension& d) const {
  return read_jsonl_as<Attribute>(run_dir_ / "collect" / pair_path(c, d, ".jsonl"));
}

// ---------------------------------------------------------------------------
// build

void Runner::build(StageWriter& w) {
  BuilderOptions opts;
  opts.model_id = config_.construction.model_id;
  opts.max_components = config_.construction.max_components;
  opts.temperature = config_.construction.temperature;
  const ChecklistBuilder builder(gateway(), prompts(), opts);

  struct Pair {
    ConditionId condition;
    Dimension dimension;
  };
  std::vector<Pair> pairs;
  for (const auto& c : config_.ta.conditions) {
    for (const auto& d : dims_) pairs.push_back({c, d});
  }
  std::vector<std::future<std::optional<std::string>>> futures;
  for (const auto& p : pairs) {
    futures.push_back(std::async(std::launch::async, [&, p]() -> std::optional<std::string> {
      try {
        const auto attrs = load_pair_attributes(p.condition, p.dimension);
        auto result = builder.build(attrs, p.dimension, p.condition.to_string());
        w.write_json(pair_path(p.condition, p.dimension, ".trace.json"), trace_to_json(result.trace));
        w.write_json(pair_path(p.condition, p.dimension, ".checklist.json"), json(result.checklist));
        return std::nullopt;
      } catch (const ChecklistBuildFailure& e) {
        auto j = trace_to_json(e.trace());
        j["error"] = e.what();
        w.write_json(pair_path(p.condition, p.dimension, ".trace.json"), j);
        return std::string(e.what());
      } catch (const std::exception& e) {
        return fmt::format("{} / {}: {}", p.dimension.name, p.condition.to_string(), e.what());
      }
    }));
  }
  std::vector<std::string> failures;
  for (auto& f : futures) {
    if (auto err = f.get()) failures.push_back(*err);
  }
  if (!failures.empty()) {
    std::string all;
    for (const auto& f : failures) all += "\n  " + f;
    throw StageFailure(Stage::Build, fmt::format("build failed for {} of {} checklists:{}", failures.size(),
                                                 pairs.size(), all));
  }
  log(fmt::format("build: {} checklists", pairs.size()));
}

// ---------------------------------------------------------------------------
// evaluate

void Runner::evaluate(StageWriter& w) {
  const Dataset subset = load_samples("subset.jsonl");
  EvaluatorOptions opts;
  opts.model_id = config_.evaluation.model_id;
  opts.temperature = config_.evaluation.temperature;
  opts.max_failure_fraction = config_.evaluation.max_failure_fraction;
  opts.workers = config_.gateway.max_inflight;
  const Evaluator evaluator(gateway(), prompts(), opts);

  std::vector<std::string> failures;
  for (const auto& c : config_.ta.conditions) {
    for (const auto& d : dims_) {
      const auto checklist =
          json::parse(read_text_file(run_dir_ / "build" / pair_path(c, d, ".checklist.json"))).get<Checklist>();
      const auto partial = w.dir() / pair_path(c, d, ".records.partial.jsonl");
      fs::create_directories(partial.parent_path());
      std::ofstream sink(partial, std::ios::binary | std::ios::trunc);
      auto on_record = [&](const EvaluationRecord& r) {
        sink << json(r).dump() << '\n';
        sink.flush();
      };
      try {
        auto result = evaluator.evaluate_dataset(subset, checklist, d, on_record);
        sink.close();
        w.write(pair_path(c, d, ".records.jsonl"),
                to_jsonl(std::vector<json>(result.records.begin(), result.records.end())));
        w.write_json(pair_path(c, d, ".report.json"), run_report_to_json(result.report));
        fs::remove(partial);
      } catch (const EvaluationAborted& e) {
        sink.close();
        w.write_json(pair_path(c, d, ".report.json"), run_report_to_json(e.report()));
        failures.push_back(fmt::format("{} / {}: {}", d.name, c.to_string(), e.what()));
      }
    }
  }
  if (!failures.empty()) {
    std::string all;
    for (const auto& f : failures) all += "\n  " + f;
    throw StageFailure(Stage::Evaluate, "evaluation aborted:" + all);
  }
}

// ---------------------------------------------------------------------------
// analyze

json correlation_entry(const analysis::PairedScores& scores, const analysis::CorrelationFn& g) {
  try {
    const auto r = analysis::sample_level(scores, g);
    return {{"value", r.value}, {"groups_used", r.groups_used}, {"groups_skipped", r.groups_skipped}};
  } catch (const UndefinedCorrelation& e) {
    return {{"value", nullptr}, {"groups_used", 0}, {"groups_skipped", scores.groups.size()}, {"reason", e.what()}};
  }
}

json fisher_entry(const json& a, const json& b, std::size_t pairs_a, std::size_t pairs_b, bool pooled) {
  if (a["value"].is_null() || b["value"].is_null()) return {{"z", nullptr}, {"reason", "correlation undefined"}};
  const double r1 = a["value"].get<double>();
  const double r2 = b["value"].get<double>();
  // Grouped data uses the number of groups entering the mean; pooled data uses pairs.
  const long n1 = static_cast<long>(pooled ? pairs_a : a["groups_used"].get<std::size_t>());
  const long n2 = static_cast<long>(pooled ? pairs_b : b["groups_used"].get<std::size_t>());
  json base = {{"r1", r1}, {"r2", r2}, {"n1", n1}, {"n2", n2}};
  try {
    const auto f = analysis::fisher_z_test(r1, n1, r2, n2);
    base["z"] = f.z;
    base["p"] = f.p_two_sided;
    base["stars"] = analysis::significance_stars(f.p_two_sided);
  } catch (const InvalidArgument& e) {
    base["z"] = nullptr;
    base["reason"] = e.what();
  }
  return base;
}

void Runner::analyze(StageWriter& w) {
  const Dataset subset = load_samples("subset.jsonl");
  std::map<std::string, const Sample*> by_id;
  for (const auto& s : subset.samples) by_id[s.id] = &s;
  const bool pooled = config_.dataset.kind == DatasetKind::Ellipse;

  // correlations
  json correlations = json::array();
  std::map<std::pair<std::string, std::string>, std::pair<json, std::size_t>> corr_index;
  for (const auto& c : config_.ta.conditions) {
    json dims = json::object();
    for (const auto& d : dims_) {
      const auto records = read_jsonl_as<EvaluationRecord>(run_dir_ / "evaluate" / pair_path(c, d, ".records.jsonl"));
      analysis::PairedScores scores;
      std::map<std::string, std::size_t> group_of;
      std::vector<double> pred, truth;
      for (const auto& r : records) {
        const Sample& s = *by_id.at(r.sample_id);
        const double t = s.ground_truth.at(d.name);
        auto [it, fresh] = group_of.emplace(s.group_key, scores.groups.size());
        if (fresh) scores.groups.push_back({s.group_key, {}});
        scores.groups[it->second].pairs.push_back({r.score, t});
        pred.push_back(r.score);
        truth.push_back(t);
      }
      if (pooled) scores = scores.pooled();
      json entry = {
          {"rho", correlation_entry(scores, [](auto x, auto y) { return analysis::spearman(x, y); })},
          {"tau", correlation_entry(scores, [](auto x, auto y) { return analysis::kendall_tau(x, y); })},
          {"mae", pred.empty() ? json(nullptr) : json(analysis::mae(pred, truth))},
          {"pairs", pred.size()},
          {"grouping", pooled ? "pooled" : "per-source"},
      };
      corr_index[{c.to_string(), d.name}] = {entry, pred.size()};
      dims[d.name] = entry;
    }
    correlations.push_back({{"condition", c.to_string()}, {"dimensions", dims}});
  }
  w.write_json("correlations.json", correlations);

  // fisher
  json fisher = json::array();
  for (const auto& [a, b] : config_.analysis.fisher_pairs) {
    json dims = json::object();
    for (const auto& d : dims_) {
      const auto& [ea, na] = corr_index.at({a.to_string(), d.name});
      const auto& [eb, nb] = corr_index.at({b.to_string(), d.name});
      dims[d.name] = {{"rho", fisher_entry(ea["rho"], eb["rho"], na, nb, pooled)},
                      {"tau", fisher_entry(ea["tau"], eb["tau"], na, nb, pooled)}};
    }
    fisher.push_back({{"condition_a", a.to_string()}, {"condition_b", b.to_string()}, {"dimensions", dims}});
  }
  w.write_json("fisher.json", fisher);

  // similarity
  const auto& embedding_model = config_.analysis.embedding_model;
  analysis::Embedder embed = [&](const std::string& t) { return gateway().embed(t, embedding_model); };
  json similarity = json::array();
  std::map<std::pair<std::string, std::string>, std::vector<Attribute>> attrs;
  for (const auto& c : config_.ta.conditions) {
    json dims = json::object();
    for (const auto& d : dims_) {
      auto& a = attrs[{c.to_string(), d.name}] = load_pair_attributes(c, d);
      json entry = {{"attributes", a.size()}};
      for (auto metric : {analysis::SimilarityMetric::RougeL, analysis::SimilarityMetric::Jaccard,
                          analysis::SimilarityMetric::Cosine}) {
        if (a.size() < 2) {
          entry[analysis::to_string(metric)] = nullptr;
          continue;
        }
        const auto r = analysis::self_similarity(a, metric, embed);
        entry[analysis::to_string(metric)] = r.mean_pairwise;
        entry["pairs"] = r.pair_count;
      }
      dims[d.name] = entry;
    }
    similarity.push_back({{"condition", c.to_string()}, {"dimensions", dims}});
  }
  w.write_json("similarity.json", similarity);

  // topics: fit on the combined pool, report per condition
  const auto comb = ConditionId::combination();
  const bool has_comb = std::find(config_.ta.conditions.begin(), config_.ta.conditions.end(), comb) !=
                        config_.ta.conditions.end();
  json topics = json::object();
  analysis::LdaOptions lda;
  lda.k = config_.analysis.lda_k;
  lda.seed = config_.analysis.lda_seed;
  lda.iterations = config_.analysis.lda_iterations;
  for (const auto& d : dims_) {
    std::vector<Attribute> corpus_attrs;
    if (has_comb) {
      corpus_attrs = attrs.at({comb.to_string(), d.name});
    } else {
      for (const auto& c : config_.ta.conditions) {
        const auto& a = attrs.at({c.to_string(), d.name});
        corpus_attrs.insert(corpus_attrs.end(), a.begin(), a.end());
      }
      corpus_attrs = deduplicate(std::move(corpus_attrs));
    }
    std::vector<std::vector<std::string>> docs;
    std::map<std::string, std::size_t> doc_of;
    for (const auto& a : corpus_attrs) {
      doc_of.emplace(a.text, docs.size());
      docs.push_back(text::tokenize(a.text));
    }
    json entry = {{"corpus", has_comb ? "Comb" : "union"}, {"documents", docs.size()}, {"k", lda.k}};
    try {
      const auto model = analysis::LdaModel::fit(docs, lda);
      entry["top_words"] = model.top_words(8);
      json conds = json::object();
      for (const auto& c : config_.ta.conditions) {
        std::vector<std::vector<double>> dist;
        for (const auto& a : attrs.at({c.to_string(), d.name})) {
          if (auto it = doc_of.find(a.text); it != doc_of.end()) {
            dist.push_back(model.document_topics()[it->second]);
          } else {
            dist.push_back(model.infer(text::tokenize(a.text), lda.iterations, lda.seed));
          }
        }
        const auto report = analysis::topic_report(dist, lda.k);
        conds[c.to_string()] = {{"topic_mass", report.topic_mass},
                                {"std_dev", report.std_dev},
                                {"documents", report.documents}};
      }
      entry["conditions"] = conds;
    } catch (const InvalidArgument& e) {
      entry["conditions"] = nullptr;
      entry["reason"] = e.what();
    }
    topics[d.name] = entry;
  }
  w.write_json("topics.json", topics);
}

}  // namespace

RunResult run_pipeline(const PipelineConfig& config, const RunOptions& options) {
  return Runner(config, options).run();
}

}  // namespace checkeval
