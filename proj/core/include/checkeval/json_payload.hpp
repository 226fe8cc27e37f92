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

#include <string_view>

#include <nlohmann/json.hpp>

namespace checkeval {

/// Extracts the JSON value an LLM reply carries.
///
/// Markdown code fences are stripped; if the remainder is not a JSON value
/// on its own, the first balanced `{...}` or `[...]` span that parses is
/// returned. No brackets or quotes are ever inserted. Throws ParseError
/// carrying the raw text when nothing parses.
nlohmann::json parse_json_payload(std::string_view text);

}  // namespace checkeval
