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
#include <vector>

namespace checkeval {

enum class ReportFormat { Csv, Json };

/// Writes plot-ready tables from a run's analysis artifacts into `<run_dir>/report/`.
///
/// Correlation table: one row per condition, columns dimension x {rho, tau, mae}.
/// Fisher table: one row per condition pair, columns dimension x {z, stars}
/// for rho and tau. Also similarity and topic tables. Throws UsageError if
/// the analyze stage has not run.
std::vector<std::filesystem::path> write_report(const std::filesystem::path& run_dir,
                                                ReportFormat format);

}  // namespace checkeval
