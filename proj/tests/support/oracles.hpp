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

// Reference implementations used only by tests. Each one is written from the
// textbook definition and shares no code with core/.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace checkeval::oracle {

// Average rank of each value: 1 + (#smaller) + (#equal - 1) / 2.
inline std::vector<double> average_ranks(const std::vector<double>& xs) {
  std::vector<double> out;
  for (double x : xs) {
    double smaller = 0, equal = 0;
    for (double y : xs) {
      if (y < x) smaller += 1;
      if (y == x) equal += 1;
    }
    out.push_back(1.0 + smaller + (equal - 1.0) / 2.0);
  }
  return out;
}

inline double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const double n = static_cast<double>(a.size());
  double sa = 0, sb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sa += a[i];
    sb += b[i];
  }
  const double ma = sa / n, mb = sb / n;
  double num = 0, da = 0, db = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += (a[i] - ma) * (b[i] - mb);
    da += (a[i] - ma) * (a[i] - ma);
    db += (b[i] - mb) * (b[i] - mb);
  }
  return num / std::sqrt(da * db);
}

inline double spearman(const std::vector<double>& a, const std::vector<double>& b) {
  return pearson(average_ranks(a), average_ranks(b));
}

// tau-b by counting every unordered pair.
inline double kendall_tau_b(const std::vector<double>& a, const std::vector<double>& b) {
  double concordant = 0, discordant = 0, tied_a = 0, tied_b = 0, pairs = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      pairs += 1;
      const double da = a[i] - a[j];
      const double db = b[i] - b[j];
      if (da == 0) tied_a += 1;
      if (db == 0) tied_b += 1;
      if (da * db > 0) concordant += 1;
      if (da * db < 0) discordant += 1;
    }
  }
  return (concordant - discordant) / std::sqrt((pairs - tied_a) * (pairs - tied_b));
}

inline bool is_constant(const std::vector<double>& xs) {
  return std::all_of(xs.begin(), xs.end(), [&](double x) { return x == xs.front(); });
}

// LCS by full dynamic-programming table.
inline std::size_t lcs(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::vector<std::vector<std::size_t>> t(a.size() + 1, std::vector<std::size_t>(b.size() + 1, 0));
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      t[i][j] = a[i - 1] == b[j - 1] ? t[i - 1][j - 1] + 1 : std::max(t[i - 1][j], t[i][j - 1]);
    }
  }
  return t[a.size()][b.size()];
}

inline double rouge_l(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  if (a.empty() || b.empty()) return 0.0;
  const double l = static_cast<double>(lcs(a, b));
  if (l == 0) return 0.0;
  const double p = l / static_cast<double>(a.size());
  const double r = l / static_cast<double>(b.size());
  return 2 * p * r / (p + r);
}

inline double jaccard(const std::set<std::string>& a, const std::set<std::string>& b) {
  std::set<std::string> inter, uni;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(inter, inter.end()));
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::inserter(uni, uni.end()));
  if (uni.empty()) return 1.0;
  return static_cast<double>(inter.size()) / static_cast<double>(uni.size());
}

// Hamilton apportionment: floors, then one extra unit to the largest fractional
// parts, ties to the lower index.
inline std::vector<std::size_t> hamilton(const std::vector<std::size_t>& counts, double fraction) {
  std::vector<std::size_t> out;
  std::vector<std::pair<double, std::size_t>> rem;
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double exact = fraction * static_cast<double>(counts[i]);
    const auto fl = static_cast<std::size_t>(std::floor(exact + 1e-12));
    out.push_back(fl);
    assigned += fl;
    rem.push_back({exact - static_cast<double>(fl), i});
  }
  const double total_exact = fraction * static_cast<double>(std::accumulate(counts.begin(), counts.end(), std::size_t{0}));
  auto target = static_cast<std::size_t>(std::llround(total_exact));
  std::stable_sort(rem.begin(), rem.end(), [](const auto& x, const auto& y) { return x.first > y.first; });
  for (std::size_t i = 0; assigned < target && i < rem.size(); ++i, ++assigned) out[rem[i].second] += 1;
  return out;
}

// First balanced {...} or [...] span, skipping brackets inside strings.
inline std::string first_balanced(std::string_view s) {
  for (std::size_t start = 0; start < s.size(); ++start) {
    if (s[start] != '{' && s[start] != '[') continue;
    std::vector<char> stack;
    bool in_string = false, escaped = false;
    for (std::size_t i = start; i < s.size(); ++i) {
      const char c = s[i];
      if (in_string) {
        if (escaped) escaped = false;
        else if (c == '\\') escaped = true;
        else if (c == '"') in_string = false;
        continue;
      }
      if (c == '"') in_string = true;
      else if (c == '{' || c == '[') stack.push_back(c == '{' ? '}' : ']');
      else if (c == '}' || c == ']') {
        if (stack.empty() || stack.back() != c) break;
        stack.pop_back();
        if (stack.empty()) return std::string(s.substr(start, i - start + 1));
      }
    }
  }
  return {};
}

}  // namespace checkeval::oracle
