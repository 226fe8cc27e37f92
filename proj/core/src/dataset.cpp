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

#include "checkeval/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <set>

#include <nlohmann/json.hpp>

#include "checkeval/errors.hpp"
#include "checkeval/json_io.hpp"
#include "checkeval/random.hpp"
#include "checkeval/text.hpp"
#include "csv.hpp"

namespace checkeval {

using nlohmann::json;

void Dataset::validate() const {
  std::set<std::string> declared;
  for (const auto& d : dimensions) declared.insert(d.name);
  std::set<std::string> ids;
  for (const auto& s : samples) {
    if (!ids.insert(s.id).second) throw InvalidArgument("duplicate sample id '" + s.id + "'");
    for (const auto& [dim, _] : s.ground_truth) {
      if (!declared.contains(dim)) {
        throw InvalidArgument("sample '" + s.id + "' scores undeclared dimension '" + dim + "'");
      }
    }
    checkeval::validate(s);
  }
}

const Dimension& Dataset::dimension(std::string_view name) const {
  for (const auto& d : dimensions) {
    if (d.name == name) return d;
  }
  throw InvalidArgument("dataset '" + this->name + "' has no dimension '" + std::string(name) + "'");
}

bool Dataset::has_dimension(std::string_view name) const {
  return std::any_of(dimensions.begin(), dimensions.end(),
                     [&](const Dimension& d) { return d.name == name; });
}

std::vector<Dimension> summeval_dimensions() {
  using C = DimensionCategory;
  return {
      {"Coherence",
       "The collective quality of all sentences. The summary should be well-structured and "
       "well-organized. The summary should not just be a heap of related information, but should "
       "build from sentence to sentence to a coherent body of information about a topic.",
       C::InternalQuality},
      {"Fluency",
       "The quality of individual sentences. Sentences in the summary should have no formatting "
       "problems, capitalization errors or obviously ungrammatical sentences (e.g., fragments, "
       "missing components) that make the text difficult to read.",
       C::InternalQuality},
      {"Consistency",
       "The factual alignment between the summary and the summarized source. A factually "
       "consistent summary contains only statements that are entailed by the source document. "
       "Summaries that contain hallucinated facts should be penalized.",
       C::ExternalAlignment},
      {"Relevance",
       "Selection of important content from the source. The summary should include only important "
       "information from the source document. Summaries which contain redundancies and excess "
       "information should be penalized.",
       C::ExternalAlignment},
  };
}

std::vector<Dimension> ellipse_dimensions() {
  using C = DimensionCategory;
  return {
      {"Overall",
       "Holistic language proficiency: how clearly and effectively the essay communicates its "
       "ideas in English, taking every other trait into account.",
       C::Uncategorized},
      {"Cohesion",
       "Text organization is well controlled, using a variety of linguistic features such as "
       "reference and transitional words and phrases to connect ideas across sentences and "
       "paragraphs, with appropriate overlap of ideas.",
       C::Uncategorized},
      {"Conventions",
       "Consistent, appropriate use of conventions such as spelling, capitalization and "
       "punctuation to convey meaning; errors are rare and do not impede understanding.",
       C::Uncategorized},
      {"Grammar",
       "Command of grammar and usage with few or no errors, across both simple and complex "
       "structures.",
       C::Uncategorized},
      {"Phraseology",
       "Flexible and effective use of a variety of phrases, such as idioms, collocations and "
       "lexical bundles, to convey precise and subtle meanings; misuse of phrasal patterns is rare.",
       C::Uncategorized},
      {"Syntax",
       "Flexible and effective use of a variety of sentence structures appropriate to the task, "
       "with few sentence formation errors.",
       C::Uncategorized},
      {"Vocabulary",
       "A wide range of vocabulary, including topic-related terms and less common lexical items, "
       "used flexibly and accurately to convey precise meanings.",
       C::Uncategorized},
  };
}

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

void record_error(LoadResult& result, LoadPolicy policy, std::size_t line, std::string id,
                  std::string message) {
  if (policy == LoadPolicy::FailFast) {
    throw ParseError(result.report.path + ":" + std::to_string(line) + ": " + message);
  }
  result.report.errors.push_back({line, std::move(id), std::move(message)});
  ++result.report.skipped;
}

std::optional<double> parse_score(std::string_view field) {
  const std::string t = text::trim(field);
  if (t.empty()) return std::nullopt;
  double v = 0.0;
  const auto* end = t.data() + t.size();
  auto [ptr, ec] = std::from_chars(t.data(), end, v);
  if (ec != std::errc{} || ptr != end || !std::isfinite(v)) return std::nullopt;
  return v;
}

}  // namespace

LoadResult load_summeval(const std::filesystem::path& path, LoadPolicy policy) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open SummEval file " + path.string());
  LoadResult result;
  result.report.path = path.string();
  result.dataset.name = "summeval";
  result.dataset.dimensions = summeval_dimensions();
  std::set<std::string> seen;

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (text::is_blank(line)) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
      record_error(result, policy, lineno, "", "not a JSON object");
      continue;
    }
    const std::string doc_id = j.value("id", std::string{});
    if (doc_id.empty()) {
      record_error(result, policy, lineno, "", "missing id");
      continue;
    }
    if (!j.contains("decoded") || !j["decoded"].is_string() || text::is_blank(j["decoded"].get<std::string>())) {
      record_error(result, policy, lineno, doc_id, "missing decoded summary");
      continue;
    }
    if (!j.contains("expert_annotations") || !j["expert_annotations"].is_array() ||
        j["expert_annotations"].empty()) {
      record_error(result, policy, lineno, doc_id, "missing expert_annotations");
      continue;
    }
    Sample s;
    s.group_key = doc_id;
    s.id = j.contains("model_id") && j["model_id"].is_string()
               ? doc_id + "/" + j["model_id"].get<std::string>()
               : doc_id + "#" + std::to_string(lineno);
    s.candidate_text = text::nfc(j["decoded"].get<std::string>());
    if (j.contains("text") && j["text"].is_string()) s.source_text = text::nfc(j["text"].get<std::string>());

    std::string problem;
    for (const auto& dim : result.dataset.dimensions) {
      const std::string key = lower(dim.name);
      double sum = 0.0;
      for (const auto& ann : j["expert_annotations"]) {
        if (!ann.is_object() || !ann.contains(key) || !ann[key].is_number()) {
          problem = "expert annotation lacks '" + key + "'";
          break;
        }
        sum += ann[key].get<double>();
      }
      if (!problem.empty()) break;
      const double mean = sum / static_cast<double>(j["expert_annotations"].size());
      if (!(mean >= 1.0 && mean <= 5.0)) {
        problem = "'" + key + "' average outside [1, 5]";
        break;
      }
      s.ground_truth[dim.name] = mean;
    }
    if (!problem.empty()) {
      record_error(result, policy, lineno, s.id, problem);
      continue;
    }
    if (!seen.insert(s.id).second) {
      record_error(result, policy, lineno, s.id, "duplicate sample id");
      continue;
    }
    result.dataset.samples.push_back(std::move(s));
    ++result.report.parsed;
  }
  return result;
}

LoadResult load_ellipse(const std::filesystem::path& path, LoadPolicy policy) {
  const std::string content = read_text_file(path);
  LoadResult result;
  result.report.path = path.string();
  result.dataset.name = "ellipse";
  result.dataset.dimensions = ellipse_dimensions();

  const auto rows = detail::parse_csv(content);
  if (rows.empty()) throw ParseError("ELLIPSE file " + path.string() + " is empty");
  std::map<std::string, std::size_t> column;
  for (std::size_t i = 0; i < rows[0].fields.size(); ++i) {
    column.emplace(lower(text::trim(rows[0].fields[i])), i);
  }
  auto find_column = [&](std::initializer_list<std::string_view> names) -> std::optional<std::size_t> {
    for (auto n : names) {
      if (auto it = column.find(std::string(n)); it != column.end()) return it->second;
    }
    return std::nullopt;
  };
  const auto text_col = find_column({"full_text", "text"});
  if (!text_col) throw ParseError("ELLIPSE header has no full_text/text column");
  const auto id_col = find_column({"text_id", "text_id_kaggle", "id"});
  std::vector<std::pair<std::string, std::optional<std::size_t>>> score_cols;
  for (const auto& dim : result.dataset.dimensions) {
    score_cols.emplace_back(dim.name, find_column({lower(dim.name)}));
  }

  std::set<std::string> seen;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& f = rows[r].fields;
    const std::size_t line = r;
    Sample s;
    s.id = id_col && *id_col < f.size() && !text::is_blank(f[*id_col]) ? text::trim(f[*id_col])
                                                                      : "row-" + std::to_string(r);
    s.group_key = s.id;
    if (*text_col >= f.size() || text::is_blank(f[*text_col])) {
      record_error(result, policy, line, s.id, "missing essay text");
      continue;
    }
    s.candidate_text = text::nfc(f[*text_col]);
    std::string problem;
    for (const auto& [name, col] : score_cols) {
      std::optional<double> v;
      if (col && *col < f.size()) v = parse_score(f[*col]);
      if (!v) {
        problem = "missing or non-numeric " + name + " score";
        break;
      }
      if (!(*v >= 1.0 && *v <= 5.0)) {
        problem = name + " score outside [1, 5]";
        break;
      }
      s.ground_truth[name] = *v;
    }
    if (!problem.empty()) {
      record_error(result, policy, line, s.id, problem);
      continue;
    }
    if (!seen.insert(s.id).second) {
      record_error(result, policy, line, s.id, "duplicate sample id");
      continue;
    }
    result.dataset.samples.push_back(std::move(s));
    ++result.report.parsed;
  }
  return result;
}

std::size_t score_bin(double score) {
  const double clamped = std::clamp(score, 1.0, 5.0);
  const auto bin = static_cast<std::size_t>(std::floor((clamped - 1.0) / 0.5 + 1e-9));
  return std::min(bin, kScoreBins - 1);
}

ScoreHistogram histogram(const Dataset& dataset, std::string_view dimension) {
  ScoreHistogram h{};
  for (const auto& s : dataset.samples) {
    if (auto it = s.ground_truth.find(std::string(dimension)); it != s.ground_truth.end()) {
      ++h[score_bin(it->second)];
    }
  }
  return h;
}

std::vector<std::size_t> largest_remainder(const std::vector<std::size_t>& counts,
                                           std::size_t total) {
  const std::size_t n = std::accumulate(counts.begin(), counts.end(), std::size_t{0});
  std::vector<std::size_t> alloc(counts.size(), 0);
  if (n == 0) return alloc;
  std::vector<double> remainder(counts.size());
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double quota = static_cast<double>(total) * static_cast<double>(counts[i]) /
                         static_cast<double>(n);
    alloc[i] = static_cast<std::size_t>(std::floor(quota + 1e-9));
    remainder[i] = quota - static_cast<double>(alloc[i]);
    assigned += alloc[i];
  }
  std::vector<std::size_t> order(counts.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b] + 1e-12; });
  for (std::size_t i = 0; assigned < total && i < order.size(); ++i) {
    if (alloc[order[i]] < counts[order[i]]) {
      ++alloc[order[i]];
      ++assigned;
    }
  }
  return alloc;
}

Dataset stratified_sample(const Dataset& dataset, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw InvalidArgument("sample fraction must lie in (0, 1]");
  }
  const std::size_t n = dataset.samples.size();
  if (fraction * static_cast<double>(n) < 1.0) {
    throw InvalidArgument("sample fraction selects fewer than one sample");
  }
  if (fraction == 1.0) return dataset;

  // Units: source groups in order of first appearance.
  std::vector<std::vector<std::size_t>> units;
  std::map<std::string, std::size_t> unit_of;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& sample = dataset.samples[i];
    auto [it, fresh] = unit_of.emplace(
        sample.group_key.empty() ? "\x1f" + sample.id : sample.group_key, units.size());
    if (fresh) units.emplace_back();
    units[it->second].push_back(i);
  }
  const std::size_t dims = dataset.dimensions.size();

  using Key = std::vector<std::size_t>;
  std::vector<Key> unit_key(units.size());
  for (std::size_t u = 0; u < units.size(); ++u) {
    for (const auto& dim : dataset.dimensions) {
      double sum = 0.0;
      std::size_t count = 0;
      for (auto i : units[u]) {
        if (auto it = dataset.samples[i].ground_truth.find(dim.name);
            it != dataset.samples[i].ground_truth.end()) {
          sum += it->second;
          ++count;
        }
      }
      unit_key[u].push_back(count ? score_bin(sum / static_cast<double>(count)) : kScoreBins);
    }
  }

  std::map<Key, std::vector<std::size_t>> strata;
  for (std::size_t u = 0; u < units.size(); ++u) strata[unit_key[u]].push_back(u);

  const auto target = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(fraction * static_cast<double>(units.size()))));

  std::vector<const Key*> keys;
  std::vector<std::size_t> sizes;
  for (const auto& [key, members] : strata) {
    keys.push_back(&key);
    sizes.push_back(members.size());
  }

  // Per-dimension marginal targets break ties between equal remainders.
  std::vector<std::vector<double>> marginal_target(dims, std::vector<double>(kScoreBins + 1, 0.0));
  for (std::size_t d = 0; d < dims; ++d) {
    std::vector<std::size_t> counts(kScoreBins + 1, 0);
    for (const auto& k : unit_key) ++counts[k[d]];
    const auto alloc = largest_remainder(counts, target);
    for (std::size_t b = 0; b <= kScoreBins; ++b) marginal_target[d][b] = static_cast<double>(alloc[b]);
  }

  std::vector<std::size_t> alloc(sizes.size());
  std::vector<double> remainder(sizes.size());
  std::size_t assigned = 0;
  for (std::size_t s = 0; s < sizes.size(); ++s) {
    const double quota = static_cast<double>(target) * static_cast<double>(sizes[s]) /
                         static_cast<double>(units.size());
    alloc[s] = static_cast<std::size_t>(std::floor(quota + 1e-9));
    remainder[s] = quota - static_cast<double>(alloc[s]);
    assigned += alloc[s];
  }
  std::vector<std::vector<double>> marginal(dims, std::vector<double>(kScoreBins + 1, 0.0));
  for (std::size_t s = 0; s < sizes.size(); ++s) {
    for (std::size_t d = 0; d < dims; ++d) marginal[d][(*keys[s])[d]] += static_cast<double>(alloc[s]);
  }
  // Fill the remaining slots where the marginals are furthest below target.
  auto deficit_of = [&](std::size_t s) {
    double deficit = 0.0;
    for (std::size_t d = 0; d < dims; ++d) {
      const auto b = (*keys[s])[d];
      deficit += marginal_target[d][b] - marginal[d][b];
    }
    return deficit;
  };
  while (assigned < target) {
    std::optional<std::size_t> best;
    double best_deficit = 0.0;
    for (std::size_t s = 0; s < sizes.size(); ++s) {
      if (alloc[s] >= sizes[s]) continue;
      const double deficit = deficit_of(s);
      if (!best || deficit > best_deficit + 1e-12 ||
          (std::abs(deficit - best_deficit) <= 1e-12 && remainder[s] > remainder[*best] + 1e-12)) {
        best = s;
        best_deficit = deficit;
      }
    }
    if (!best) break;
    ++alloc[*best];
    ++assigned;
    for (std::size_t d = 0; d < dims; ++d) marginal[d][(*keys[*best])[d]] += 1.0;
  }

  // Repair: move single slots between strata while that lowers the squared
  // marginal error, with the squared joint-quota error as a secondary term.
  auto move_gain = [&](std::size_t from, std::size_t to) {
    double gain = 0.0;
    for (std::size_t d = 0; d < dims; ++d) {
      const auto bf = (*keys[from])[d];
      const auto bt = (*keys[to])[d];
      if (bf == bt) continue;
      const double ef = marginal[d][bf] - marginal_target[d][bf];
      const double et = marginal[d][bt] - marginal_target[d][bt];
      gain += 1e3 * ((ef * ef - (ef - 1) * (ef - 1)) + (et * et - (et + 1) * (et + 1)));
    }
    auto quota = [&](std::size_t s) {
      return static_cast<double>(target) * static_cast<double>(sizes[s]) / static_cast<double>(units.size());
    };
    const double df = static_cast<double>(alloc[from]) - quota(from);
    const double dt = static_cast<double>(alloc[to]) - quota(to);
    gain += (df * df - (df - 1) * (df - 1)) + (dt * dt - (dt + 1) * (dt + 1));
    return gain;
  };
  for (int round = 0; round < 10000; ++round) {
    std::optional<std::pair<std::size_t, std::size_t>> best;
    double best_gain = 1e-9;
    for (std::size_t from = 0; from < sizes.size(); ++from) {
      if (alloc[from] == 0) continue;
      for (std::size_t to = 0; to < sizes.size(); ++to) {
        if (to == from || alloc[to] >= sizes[to]) continue;
        const double gain = move_gain(from, to);
        if (gain > best_gain) {
          best_gain = gain;
          best = {from, to};
        }
      }
    }
    if (!best) break;
    --alloc[best->first];
    ++alloc[best->second];
    for (std::size_t d = 0; d < dims; ++d) {
      marginal[d][(*keys[best->first])[d]] -= 1.0;
      marginal[d][(*keys[best->second])[d]] += 1.0;
    }
  }

  Rng rng(seed);
  std::vector<bool> keep(n, false);
  std::size_t s = 0;
  for (auto& [key, members] : strata) {
    auto shuffled = members;
    rng.shuffle(shuffled);
    for (std::size_t i = 0; i < alloc[s]; ++i) {
      for (auto sample : units[shuffled[i]]) keep[sample] = true;
    }
    ++s;
  }

  Dataset out;
  out.name = dataset.name;
  out.dimensions = dataset.dimensions;
  for (std::size_t i = 0; i < n; ++i) {
    if (keep[i]) out.samples.push_back(dataset.samples[i]);
  }
  return out;
}

}  // namespace checkeval
