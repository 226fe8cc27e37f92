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

#include "checkeval/report.hpp"

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "checkeval/json_io.hpp"
#include "checkeval/pipeline.hpp"

namespace checkeval {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<json>> rows;
};

std::string csv_cell(const json& v) {
  if (v.is_null()) return "";
  if (v.is_number_float()) return fmt::format("{:.4f}", v.get<double>());
  if (v.is_number()) return v.dump();
  std::string s = v.is_string() ? v.get<std::string>() : v.dump();
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

std::string to_csv(const Table& t) {
  std::string out;
  for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + csv_cell(t.columns[i]);
  out += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + csv_cell(row[i]);
    out += '\n';
  }
  return out;
}

json to_json_rows(const Table& t) {
  json rows = json::array();
  for (const auto& row : t.rows) {
    json r = json::object();
    for (std::size_t i = 0; i < row.size(); ++i) r[t.columns[i]] = row[i];
    rows.push_back(r);
  }
  return rows;
}

std::vector<std::string> dimension_names(const json& conditions) {
  std::vector<std::string> names;
  if (conditions.empty()) return names;
  for (const auto& item : conditions.front().at("dimensions").items()) names.push_back(item.key());
  return names;
}

Table correlation_table(const json& correlations) {
  Table t{"correlations", {"condition"}, {}};
  const auto dims = dimension_names(correlations);
  for (const auto& d : dims) {
    for (const char* m : {"rho", "tau", "mae"}) t.columns.push_back(d + "_" + m);
  }
  for (const auto& c : correlations) {
    std::vector<json> row{c.at("condition")};
    for (const auto& d : dims) {
      const auto& e = c.at("dimensions").at(d);
      row.push_back(e.at("rho").at("value"));
      row.push_back(e.at("tau").at("value"));
      row.push_back(e.at("mae"));
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table fisher_table(const json& fisher) {
  Table t{"fisher", {"condition_a", "condition_b"}, {}};
  const auto dims = dimension_names(fisher);
  for (const auto& d : dims) {
    for (const char* m : {"rho", "tau"}) {
      t.columns.push_back(d + "_" + m + "_z");
      t.columns.push_back(d + "_" + m + "_p");
      t.columns.push_back(d + "_" + m + "_stars");
    }
  }
  for (const auto& f : fisher) {
    std::vector<json> row{f.at("condition_a"), f.at("condition_b")};
    for (const auto& d : dims) {
      for (const char* m : {"rho", "tau"}) {
        const auto& e = f.at("dimensions").at(d).at(m);
        row.push_back(e.value("z", json(nullptr)));
        row.push_back(e.value("p", json(nullptr)));
        row.push_back(e.value("stars", json("")));
      }
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table similarity_table(const json& similarity) {
  Table t{"similarity", {"condition", "dimension", "attributes", "rouge_l", "jaccard", "cosine"}, {}};
  for (const auto& c : similarity) {
    for (const auto& item : c.at("dimensions").items()) {
      const std::string dim = item.key();
      const auto& e = item.value();
      t.rows.push_back({c.at("condition"), dim, e.at("attributes"), e.at("rouge_l"), e.at("jaccard"), e.at("cosine")});
    }
  }
  return t;
}

Table topic_table(const json& topics) {
  Table t{"topics", {"dimension", "condition", "documents", "std_dev"}, {}};
  int k = 0;
  for (const auto& item : topics.items()) k = std::max(k, item.value().at("k").get<int>());
  for (int i = 0; i < k; ++i) t.columns.push_back(fmt::format("topic_{}", i));
  for (const auto& item : topics.items()) {
    const std::string dim = item.key();
    const auto& e = item.value();
    if (e.at("conditions").is_null()) continue;
    for (const auto& entry : e.at("conditions").items()) {
      const std::string cond = entry.key();
      const auto& r = entry.value();
      std::vector<json> row{dim, cond, r.at("documents"), r.at("std_dev")};
      for (int i = 0; i < k; ++i) {
        row.push_back(i < static_cast<int>(r.at("topic_mass").size()) ? r.at("topic_mass")[i] : json(nullptr));
      }
      t.rows.push_back(std::move(row));
    }
  }
  return t;
}

}  // namespace

std::vector<fs::path> write_report(const fs::path& run_dir, ReportFormat format) {
  verify_manifest(run_dir, Stage::Analyze);
  auto load = [&](const char* name) {
    try {
      return json::parse(read_text_file(run_dir / "analyze" / name));
    } catch (const json::exception& e) {
      throw UsageError(fmt::format("cannot read analyze/{}: {}", name, e.what()));
    }
  };
  std::vector<Table> tables;
  try {
    tables.push_back(correlation_table(load("correlations.json")));
    tables.push_back(fisher_table(load("fisher.json")));
    tables.push_back(similarity_table(load("similarity.json")));
    tables.push_back(topic_table(load("topics.json")));
  } catch (const json::exception& e) {
    throw UsageError(std::string("analysis artifacts are malformed: ") + e.what());
  }
  std::vector<fs::path> written;
  fs::create_directories(run_dir / "report");
  for (const auto& t : tables) {
    if (format == ReportFormat::Csv) {
      written.push_back(run_dir / "report" / (t.name + ".csv"));
      write_text_file_atomic(written.back(), to_csv(t));
    } else {
      written.push_back(run_dir / "report" / (t.name + ".json"));
      write_text_file_atomic(written.back(), dump_pretty(to_json_rows(t)));
    }
  }
  return written;
}

}  // namespace checkeval
