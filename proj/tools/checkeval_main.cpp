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

#include <cstdlib>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "checkeval/config.hpp"
#include "checkeval/gateway.hpp"
#include "checkeval/json_io.hpp"
#include "checkeval/pipeline.hpp"
#include "checkeval/report.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitStageFailure = 1;
constexpr int kExitUsage = 2;

int cmd_run(const std::string& config_path, const std::string& stages, const std::string& out,
            const std::string& backend, const std::string& cache_dir) {
  const auto config = checkeval::load_config(config_path);
  checkeval::RunOptions options;
  options.stages = checkeval::parse_stage_list(stages);
  options.out_root = out;
  if (!backend.empty()) options.backend_override = checkeval::parse_backend_kind(backend);
  if (!cache_dir.empty()) options.cache_dir_override = fs::path(cache_dir);
  options.log = [](std::string_view line) { std::cout << line << "\n"; };
  const auto result = checkeval::run_pipeline(config, options);
  std::cout << "run directory: " << result.run_dir.string() << "\n";
  return 0;
}

int cmd_report(const std::string& run_dir, const std::string& format) {
  const auto fmt_kind = format == "json" ? checkeval::ReportFormat::Json : checkeval::ReportFormat::Csv;
  for (const auto& p : checkeval::write_report(run_dir, fmt_kind)) std::cout << p.string() << "\n";
  return 0;
}

int cmd_checklist_show(const std::string& target, const std::string& condition, const std::string& dimension) {
  fs::path file = target;
  if (fs::is_directory(file)) {
    if (condition.empty() || dimension.empty()) {
      throw checkeval::UsageError("a run directory needs --condition and --dimension");
    }
    file = file / "build" / checkeval::ConditionId::parse(condition).slug() / (dimension + ".checklist.json");
  }
  if (!fs::exists(file)) throw checkeval::UsageError("no checklist at " + file.string());
  const auto checklist = json::parse(checkeval::read_text_file(file)).get<checkeval::Checklist>();
  std::cout << checklist.dimension << " (" << checklist.provenance.condition << ", run "
            << checklist.provenance.run_id << ", validated by " << checklist.provenance.validated_by << ")\n";
  for (std::size_t i = 0; i < checklist.questions.size(); ++i) {
    const auto& q = checklist.questions[i];
    std::cout << fmt::format("{:2}. {}  [{}]\n", i + 1, q.text, q.component_label);
  }
  return 0;
}

int cmd_cache_purge(const std::string& config_path, const std::string& dir) {
  fs::path cache = dir;
  if (cache.empty()) {
    if (config_path.empty()) throw checkeval::UsageError("cache purge needs --dir or --config");
    const auto config = checkeval::load_config(config_path);
    cache = config.resolve(config.gateway.cache_dir);
  }
  const auto n = checkeval::Gateway::purge_cache(cache);
  std::cout << "removed " << n << " cache entries from " << cache.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Checklist-based text evaluation pipeline"};
  app.require_subcommand(1);
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "Log progress details");

  auto* run = app.add_subcommand("run", "Run pipeline stages for a config");
  std::string config_path, stages = "all", out = "runs", backend, cache_dir;
  run->add_option("--config", config_path, "Pipeline config (TOML or JSON)")->required();
  run->add_option("--stages", stages, "Comma-separated stages or 'all'")->capture_default_str();
  run->add_option("--out", out, "Root directory for run artifacts")->capture_default_str();
  run->add_option("--backend", backend, "Override the configured backend")
      ->check(CLI::IsMember({"mock", "live"}));
  run->add_option("--cache-dir", cache_dir, "Override the configured cache directory");

  auto* report = app.add_subcommand("report", "Write report tables for a finished run");
  std::string run_dir, format = "csv";
  report->add_option("run_dir", run_dir, "Run directory")->required();
  report->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();

  auto* checklist = app.add_subcommand("checklist", "Inspect checklists");
  checklist->require_subcommand(1);
  auto* show = checklist->add_subcommand("show", "Print a checklist");
  std::string target, condition, dimension;
  show->add_option("target", target, "Checklist JSON file or run directory")->required();
  show->add_option("--condition", condition, "Condition, e.g. Comb or SL:gpt-4");
  show->add_option("--dimension", dimension, "Dimension name");

  auto* cache = app.add_subcommand("cache", "Manage the response cache");
  cache->require_subcommand(1);
  auto* purge = cache->add_subcommand("purge", "Delete every cached response");
  std::string purge_config, purge_dir;
  purge->add_option("--config", purge_config, "Config whose cache to purge");
  purge->add_option("--dir", purge_dir, "Cache directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }
  spdlog::set_level(verbose ? spdlog::level::info : spdlog::level::warn);

  try {
    if (*run) return cmd_run(config_path, stages, out, backend, cache_dir);
    if (*report) return cmd_report(run_dir, format);
    if (*show) return cmd_checklist_show(target, condition, dimension);
    if (*purge) return cmd_cache_purge(purge_config, purge_dir);
  } catch (const checkeval::UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const checkeval::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const checkeval::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const checkeval::StageFailure& e) {
    std::cerr << "stage " << checkeval::to_string(e.stage()) << " failed: " << e.what() << "\n";
    return kExitStageFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitStageFailure;
  }
  return kExitUsage;
}
