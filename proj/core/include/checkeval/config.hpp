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

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "checkeval/model.hpp"

namespace checkeval {

enum class DatasetKind { SummEval, Ellipse };
enum class BackendKind { Live, Mock };

std::string to_string(DatasetKind kind);
std::string to_string(BackendKind kind);
BackendKind parse_backend_kind(std::string_view text);

/// Everything a pipeline run depends on. Relative paths are resolved
/// against the directory of the config file.
struct PipelineConfig {
  struct DatasetSection {
    DatasetKind kind = DatasetKind::SummEval;
    std::filesystem::path path;
  };
  struct TaSection {
    std::vector<std::string> llm_model_ids;
    std::optional<std::filesystem::path> human_attributes_path;
    std::vector<ConditionId> conditions;
    /// Unset keeps the provider default for attribute generation.
    std::optional<double> temperature;
  };
  struct ConstructionSection {
    std::string model_id = "gpt-4";
    int max_components = 5;
    double temperature = 0.0;
  };
  struct EvaluationSection {
    std::string model_id = "gpt-4";
    double temperature = 0.0;
    double max_failure_fraction = 0.05;
  };
  struct AnalysisSection {
    std::vector<std::pair<ConditionId, ConditionId>> fisher_pairs;
    int lda_k = 5;
    std::uint64_t lda_seed = 0;
    int lda_iterations = 500;
    std::string embedding_model = "text-embedding-3-small";
  };
  struct GatewaySection {
    BackendKind backend = BackendKind::Mock;
    std::filesystem::path cache_dir = "cache";
    int max_inflight = 4;
    int max_retries = 3;
    std::optional<std::filesystem::path> mock_fixture;
  };

  std::filesystem::path base_dir;
  DatasetSection dataset;
  std::vector<std::string> dimensions;
  std::map<std::string, std::string> rubric_overrides;
  double sample_fraction = 0.1;
  std::uint64_t seed = 0;
  /// Builtin prompt set; defaults from the dataset kind when empty.
  std::string prompt_set;
  std::optional<std::filesystem::path> prompt_dir;
  TaSection ta;
  ConstructionSection construction;
  EvaluationSection evaluation;
  AnalysisSection analysis;
  GatewaySection gateway;

  std::filesystem::path resolve(const std::filesystem::path& p) const;
  std::string effective_prompt_set() const;
  /// Declared dimensions with rubric overrides applied, in config order.
  std::vector<Dimension> resolved_dimensions() const;
};

/// Reads TOML (by default) or JSON (`.json` extension). Throws ConfigError.
PipelineConfig load_config(const std::filesystem::path& path);
PipelineConfig config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);
nlohmann::json config_to_json(const PipelineConfig& config);

/// Empty when the config is usable; otherwise one message per problem.
std::vector<std::string> validate_config(const PipelineConfig& config);

}  // namespace checkeval
