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

#include <string>
#include <string_view>
#include <vector>

namespace checkeval::text {

/// Unicode NFC normalization of UTF-8 text.
std::string nfc(std::string_view utf8);

std::string trim(std::string_view s);
bool is_blank(std::string_view s);

/// Lowercased runs of Unicode letters and digits; everything else separates.
std::vector<std::string> tokenize(std::string_view utf8);

/// Case-folded, whitespace-collapsed, trimmed form used for fuzzy-exact matching.
std::string match_key(std::string_view utf8);

/// True if `word` appears in `utf8` as a whole token, case-insensitively.
bool contains_word(std::string_view utf8, std::string_view word);

}  // namespace checkeval::text
