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
#include <map>
#include <string>
#include <string_view>

namespace checkeval {

using TemplateValues = std::map<std::string, std::string, std::less<>>;

/// Replaces every `{Name}` whose Name is a key of `values`.
///
/// Single pass: substituted text is never rescanned, and braces that do not
/// name a supplied key (literal JSON examples, for instance) are copied as is.
std::string render_template(std::string_view tpl, const TemplateValues& values);

/// The named collection of prompt template files used by every LLM stage.
///
/// Keys are file stems: ta_system, ta_user, ta_sample, ta_sample_nosource,
/// extract_system, extract_user, cluster_system, cluster_user, keyq_system,
/// keyq_user, subq_system, subq_user, validate_system, validate_user,
/// answer_system, answer_user, answer_source.
class PromptSet {
 public:
  /// "news-summary" or "essay"; InvalidArgument otherwise.
  static PromptSet builtin(std::string_view name);

  /// Starts from a builtin set and overrides each key with `<dir>/<key>.txt` if present.
  static PromptSet from_directory(const std::filesystem::path& dir,
                                  std::string_view base = "news-summary");

  const std::string& name() const noexcept { return name_; }
  const std::string& get(std::string_view key) const;
  std::string render(std::string_view key, const TemplateValues& values) const {
    return render_template(get(key), values);
  }
  const std::map<std::string, std::string, std::less<>>& templates() const noexcept {
    return templates_;
  }

 private:
  std::string name_;
  std::map<std::string, std::string, std::less<>> templates_;
};

}  // namespace checkeval
