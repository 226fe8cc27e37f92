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

#include "checkeval/analysis/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "checkeval/errors.hpp"

namespace checkeval::analysis {

namespace {

void check_pair(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) {
    throw InvalidArgument(fmt::format("length mismatch: {} vs {}", xs.size(), ys.size()));
  }
  if (xs.size() < 2) throw InvalidArgument("correlation needs at least two pairs");
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!std::isfinite(xs[i]) || !std::isfinite(ys[i])) throw InvalidArgument("non-finite score");
  }
}

bool constant(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
}

int sign(double d) { return (d > 0) - (d < 0); }

}  // namespace

std::vector<double> mid_ranks(std::span<const double> xs) {
  std::vector<std::size_t> order(xs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
  std::vector<double> ranks(xs.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && xs[order[j + 1]] == xs[order[i]]) ++j;
    const double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = rank;
    i = j + 1;
  }
  return ranks;
}

double pearson(std::span<const double> xs, std::span<const double> ys) {
  check_pair(xs, ys);
  if (constant(xs) || constant(ys)) throw UndefinedCorrelation("correlation of a constant list");
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw UndefinedCorrelation("correlation of a constant list");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double spearman(std::span<const double> xs, std::span<const double> ys) {
  check_pair(xs, ys);
  if (constant(xs) || constant(ys)) throw UndefinedCorrelation("correlation of a constant list");
  const auto rx = mid_ranks(xs);
  const auto ry = mid_ranks(ys);
  return pearson(rx, ry);
}

double kendall_tau(std::span<const double> xs, std::span<const double> ys) {
  check_pair(xs, ys);
  if (constant(xs) || constant(ys)) throw UndefinedCorrelation("correlation of a constant list");
  long long concordant = 0, discordant = 0, ties_x = 0, ties_y = 0, pairs = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t j = i + 1; j < xs.size(); ++j) {
      ++pairs;
      const int sx = sign(xs[i] - xs[j]);
      const int sy = sign(ys[i] - ys[j]);
      if (sx == 0) ++ties_x;
      if (sy == 0) ++ties_y;
      if (sx * sy > 0) ++concordant;
      if (sx * sy < 0) ++discordant;
    }
  }
  const double denom = std::sqrt(static_cast<double>(pairs - ties_x) * static_cast<double>(pairs - ties_y));
  return std::clamp(static_cast<double>(concordant - discordant) / denom, -1.0, 1.0);
}

std::size_t PairedScores::pair_count() const {
  std::size_t n = 0;
  for (const auto& g : groups) n += g.pairs.size();
  return n;
}

PairedScores PairedScores::pooled(std::string group_key) const {
  ScoreGroup all{std::move(group_key), {}};
  for (const auto& g : groups) all.pairs.insert(all.pairs.end(), g.pairs.begin(), g.pairs.end());
  return PairedScores{{std::move(all)}};
}

SampleLevelResult sample_level(const PairedScores& scores, const CorrelationFn& g) {
  SampleLevelResult result;
  double sum = 0.0;
  for (const auto& group : scores.groups) {
    if (group.pairs.size() < 2) {
      ++result.groups_skipped;
      continue;
    }
    std::vector<double> pred, truth;
    for (const auto& p : group.pairs) {
      pred.push_back(p.predicted);
      truth.push_back(p.truth);
    }
    try {
      const double v = g(pred, truth);
      if (!std::isfinite(v)) {
        ++result.groups_skipped;
        continue;
      }
      sum += v;
      ++result.groups_used;
    } catch (const UndefinedCorrelation&) {
      ++result.groups_skipped;
    }
  }
  if (result.groups_used == 0) {
    throw UndefinedCorrelation(fmt::format("no usable group among {}", scores.groups.size()));
  }
  result.value = sum / static_cast<double>(result.groups_used);
  return result;
}

double mae(std::span<const double> predicted, std::span<const double> truth) {
  if (predicted.size() != truth.size()) {
    throw InvalidArgument(fmt::format("length mismatch: {} vs {}", predicted.size(), truth.size()));
  }
  if (predicted.empty()) throw InvalidArgument("MAE of empty lists");
  double sum = 0.0;
  for (std::size_t i = 0; i < predicted.size(); ++i) sum += std::abs(predicted[i] - truth[i]);
  return sum / static_cast<double>(predicted.size());
}

double normal_two_sided_p(double z) { return std::erfc(std::abs(z) / std::sqrt(2.0)); }

FisherResult fisher_z_test(double r1, long n1, double r2, long n2) {
  for (double r : {r1, r2}) {
    if (!(std::abs(r) < 1.0)) throw InvalidArgument(fmt::format("correlation {} outside (-1, 1)", r));
  }
  for (long n : {n1, n2}) {
    if (n <= 3) throw InvalidArgument(fmt::format("Fisher test needs n > 3, got {}", n));
  }
  const double se = std::sqrt(1.0 / static_cast<double>(n1 - 3) + 1.0 / static_cast<double>(n2 - 3));
  FisherResult result;
  result.z = (std::atanh(r1) - std::atanh(r2)) / se;
  result.p_two_sided = normal_two_sided_p(result.z);
  return result;
}

std::string significance_stars(double p) {
  if (p < 0.001) return "***";
  if (p < 0.01) return "**";
  if (p < 0.05) return "*";
  return "";
}

}  // namespace checkeval::analysis
