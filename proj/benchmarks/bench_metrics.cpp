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

#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "checkeval/analysis/lda.hpp"
#include "checkeval/analysis/similarity.hpp"
#include "checkeval/analysis/stats.hpp"

namespace {

using namespace checkeval::analysis;

std::vector<double> scores(std::size_t n, unsigned seed) {
  std::mt19937 gen(seed);
  std::uniform_int_distribution<int> d(1, 5);
  std::vector<double> v(n);
  for (auto& x : v) x = d(gen);
  return v;
}

std::vector<std::string> words(std::size_t n, unsigned seed) {
  std::mt19937 gen(seed);
  std::uniform_int_distribution<int> d(0, 40);
  std::vector<std::string> v(n);
  for (auto& w : v) w = "w" + std::to_string(d(gen));
  return v;
}

void BM_Spearman(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto x = scores(n, 1), y = scores(n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(spearman(x, y));
}
BENCHMARK(BM_Spearman)->Arg(16)->Arg(100)->Arg(1600);

void BM_Kendall(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto x = scores(n, 3), y = scores(n, 4);
  for (auto _ : state) benchmark::DoNotOptimize(kendall_tau(x, y));
}
BENCHMARK(BM_Kendall)->Arg(16)->Arg(100)->Arg(1600);

void BM_RougeL(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = words(n, 5), b = words(n, 6);
  for (auto _ : state) benchmark::DoNotOptimize(rouge_l_f1(a, b));
}
BENCHMARK(BM_RougeL)->Arg(10)->Arg(40)->Arg(200);

void BM_LdaFit(benchmark::State& state) {
  std::vector<std::vector<std::string>> docs;
  for (unsigned i = 0; i < 200; ++i) docs.push_back(words(12, i));
  LdaOptions o;
  o.k = 5;
  o.seed = 1;
  o.iterations = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(LdaModel::fit(docs, o));
}
BENCHMARK(BM_LdaFit)->Arg(50)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
