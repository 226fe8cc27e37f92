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

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace checkeval::analysis {

/// Average (mid) ranks, 1-based; tied values share the mean of their positions.
std::vector<double> mid_ranks(std::span<const double> xs);

double pearson(std::span<const double> xs, std::span<const double> ys);

/// Pearson correlation of mid-ranks.
///
/// Requires equal lengths of at least 2; throws UndefinedCorrelation if
/// either list is constant and InvalidArgument on a length mismatch.
double spearman(std::span<const double> xs, std::span<const double> ys);

/// Tie-corrected Kendall tau-b. Preconditions as for spearman().
double kendall_tau(std::span<const double> xs, std::span<const double> ys);

struct ScoredPair {
  double predicted = 0.0;
  double truth = 0.0;
};

struct ScoreGroup {
  std::string group_key;
  std::vector<ScoredPair> pairs;
};

struct PairedScores {
  std::vector<ScoreGroup> groups;

  std::size_t pair_count() const;
  /// All pairs as one group, for datasets without source grouping.
  PairedScores pooled(std::string group_key = "all") const;
};

using CorrelationFn = std::function<double(std::span<const double>, std::span<const double>)>;

struct SampleLevelResult {
  double value = 0.0;
  std::size_t groups_used = 0;
  /// Groups with fewer than two pairs or an undefined correlation.
  std::size_t groups_skipped = 0;
};

/// Mean of `g` over groups; UndefinedCorrelation when no group is usable.
SampleLevelResult sample_level(const PairedScores& scores, const CorrelationFn& g);

double mae(std::span<const double> predicted, std::span<const double> truth);

struct FisherResult {
  double z = 0.0;
  double p_two_sided = 1.0;
};

/// Compares two independent correlations after the atanh transform.
///
/// Requires |r| < 1 and n > 3 for both.
FisherResult fisher_z_test(double r1, long n1, double r2, long n2);

/// Two-sided standard normal tail probability of |z|.
double normal_two_sided_p(double z);

/// "***" for p < 0.001, "**" for p < 0.01, "*" for p < 0.05, else "".
std::string significance_stars(double p);

}  // namespace checkeval::analysis
