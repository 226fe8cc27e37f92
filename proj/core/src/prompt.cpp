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

#include "checkeval/prompt.hpp"

#include <array>

#include "builtin_templates.hpp"
#include "checkeval/errors.hpp"
#include "checkeval/json_io.hpp"

namespace checkeval {
namespace {

constexpr std::array<std::string_view, 17> kTemplateKeys{
    "ta_system",      "ta_user",        "ta_sample",     "ta_sample_nosource",
    "extract_system", "extract_user",   "cluster_system", "cluster_user",
    "keyq_system",    "keyq_user",      "subq_system",   "subq_user",
    "validate_system", "validate_user", "answer_system", "answer_user",
    "answer_source"};

// Template files end with a newline that is not part of the prompt.
std::string strip_final_newline(std::string_view s) {
  if (!s.empty() && s.back() == '\n') s.remove_suffix(1);
  if (!s.empty() && s.back() == '\r') s.remove_suffix(1);
  return std::string(s);
}

}  // namespace

std::string render_template(std::string_view tpl, const TemplateValues& values) {
  std::string out;
  out.reserve(tpl.size());
  std::size_t i = 0;
  while (i < tpl.size()) {
    if (tpl[i] == '{') {
      const auto close = tpl.find('}', i + 1);
      if (close != std::string_view::npos) {
        const auto name = tpl.substr(i + 1, close - i - 1);
        if (auto it = values.find(name); it != values.end()) {
          out += it->second;
          i = close + 1;
          continue;
        }
      }
    }
    out += tpl[i++];
  }
  return out;
}

PromptSet PromptSet::builtin(std::string_view name) {
  PromptSet set;
  set.name_ = std::string(name);
  const std::string prefix = set.name_ + "/";
  for (const auto& [path, body] : detail::builtin_template_files()) {
    if (path.substr(0, prefix.size()) != prefix) continue;
    auto stem = path.substr(prefix.size());
    if (stem.size() > 4 && stem.substr(stem.size() - 4) == ".txt") stem.remove_suffix(4);
    set.templates_.emplace(std::string(stem), strip_final_newline(body));
  }
  if (set.templates_.empty()) {
    throw InvalidArgument("unknown prompt set '" + set.name_ + "'");
  }
  for (auto key : kTemplateKeys) {
    if (!set.templates_.contains(key)) {
      throw Error("builtin prompt set '" + set.name_ + "' lacks " + std::string(key));
    }
  }
  return set;
}

PromptSet PromptSet::from_directory(const std::filesystem::path& dir, std::string_view base) {
  PromptSet set = builtin(base);
  set.name_ = dir.string();
  for (auto key : kTemplateKeys) {
    const auto file = dir / (std::string(key) + ".txt");
    if (std::filesystem::exists(file)) {
      set.templates_[std::string(key)] = strip_final_newline(read_text_file(file));
    }
  }
  return set;
}

const std::string& PromptSet::get(std::string_view key) const {
  auto it = templates_.find(key);
  if (it == templates_.end()) throw InvalidArgument("no prompt template '" + std::string(key) + "'");
  return it->second;
}

}  // namespace checkeval
