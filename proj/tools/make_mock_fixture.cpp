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

// Records a mock-backend fixture for a pipeline config by running every
// stage against the rule-based responder.

#include <cstdlib>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "checkeval/config.hpp"
#include "checkeval/dataset.hpp"
#include "checkeval/json_io.hpp"
#include "checkeval/pipeline.hpp"
#include "mock_responder.hpp"

namespace fs = std::filesystem;

int main(int argc, char** argv) {
  CLI::App app{"Record a mock LLM fixture for a checkeval config"};
  std::string config_path;
  std::string out_path;
  std::string work_dir;
  app.add_option("--config", config_path, "Pipeline config (TOML or JSON)")->required();
  app.add_option("--out", out_path, "Fixture file to write")->required();
  app.add_option("--work-dir", work_dir, "Scratch directory for the recording run");
  CLI11_PARSE(app, argc, argv);
  spdlog::set_level(spdlog::level::warn);

  try {
    auto config = checkeval::load_config(config_path);
    // The fixture being recorded may not exist yet.
    config.gateway.mock_fixture.reset();
    const auto path = config.resolve(config.dataset.path);
    auto loaded = config.dataset.kind == checkeval::DatasetKind::SummEval ? checkeval::load_summeval(path)
                                                                          : checkeval::load_ellipse(path);
    const auto prompts = config.prompt_dir
                             ? checkeval::PromptSet::from_directory(config.resolve(*config.prompt_dir),
                                                                    config.effective_prompt_set())
                             : checkeval::PromptSet::builtin(config.effective_prompt_set());
    const checkeval::tools::RuleResponder responder(prompts, loaded.dataset);
    auto backend = std::make_shared<checkeval::tools::RecordingBackend>(responder);

    const fs::path scratch = work_dir.empty() ? fs::temp_directory_path() / "checkeval-fixture-run" : fs::path(work_dir);
    fs::remove_all(scratch);
    checkeval::RunOptions options;
    options.out_root = scratch;
    options.backend = backend;
    options.cache_dir_override = fs::path{};
    checkeval::run_pipeline(config, options);
    checkeval::write_text_file_atomic(out_path, backend->fixture_jsonl());
    std::cout << "recorded " << backend->size() << " replies to " << out_path << "\n";
    if (work_dir.empty()) fs::remove_all(scratch);
  } catch (const std::exception& e) {
    std::cerr << "make_mock_fixture: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
