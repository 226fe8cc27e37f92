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

#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "checkeval/config.hpp"
#include "checkeval/errors.hpp"
#include "checkeval/gateway.hpp"

namespace checkeval {

enum class Stage { Ingest, Collect, Build, Evaluate, Analyze };

std::string to_string(Stage stage);
Stage parse_stage(std::string_view name);
std::vector<Stage> all_stages();
/// Comma-separated stage names, or "all".
std::vector<Stage> parse_stage_list(std::string_view text);

/// Bad config or missing upstream artifacts (exit code 2).
class UsageError : public Error {
 public:
  using Error::Error;
};

/// A stage ran and failed (exit code 1).
class StageFailure : public Error {
 public:
  StageFailure(Stage stage, const std::string& what) : Error(what), stage_(stage) {}
  Stage stage() const noexcept { return stage_; }

 private:
  Stage stage_;
};

struct RunOptions {
  std::filesystem::path out_root = "runs";
  std::vector<Stage> stages = all_stages();
  std::optional<BackendKind> backend_override;
  /// Used instead of the configured backend when set.
  std::shared_ptr<ChatBackend> backend;
  std::optional<std::filesystem::path> cache_dir_override;
  std::function<void(std::string_view)> log;
};

struct StageOutcome {
  Stage stage;
  bool up_to_date = false;
};

struct RunResult {
  std::filesystem::path run_dir;
  std::vector<StageOutcome> stages;
};

/// Short content hash of the config; names the run directory.
std::string config_hash(const PipelineConfig& config);
std::filesystem::path run_directory(const PipelineConfig& config,
                                    const std::filesystem::path& out_root);

/// Runs the requested stages in dependency order. Stages whose inputs and
/// outputs match their manifest are skipped as up-to-date.
RunResult run_pipeline(const PipelineConfig& config, const RunOptions& options);

/// Checks that every output a manifest lists exists with its recorded hash.
/// Throws UsageError naming the first problem.
void verify_manifest(const std::filesystem::path& run_dir, Stage stage);

std::filesystem::path manifest_path(const std::filesystem::path& run_dir, Stage stage);

}  // namespace checkeval
