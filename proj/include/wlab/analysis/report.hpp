// Copyright 2026 The wlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
// https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "wlab/analysis/scoring.hpp"
#include "wlab/analysis/stats.hpp"

namespace wlab::analysis {

struct Group {
  std::string label;
  Summary summary;
  std::optional<double> consistency_rate;  // % of included files
  int files = 0;
  int excluded = 0;
  std::vector<double> totals;  // empty for summary-only groups
  std::map<std::string, Summary> subscales;
};

// Excluded files (more than 8 invalid) never reach the summary.
Group group_from_scored(std::string label, const std::vector<ScoredFile>& files);
Group group_from_summary(std::string label, Summary summary,
                         std::optional<double> consistency_rate = std::nullopt);

// A directory holding either summary.json ({mean, sd, n[, consistency_rate]})
// or "*_scores.json" files.
Group load_group(const std::filesystem::path& dir, const scale::ItemBank& bank,
                 std::string label = {});

struct SubscaleComparison {
  Summary a;
  Summary b;
  std::optional<TestResult> test;
  std::optional<double> cohen_d;
};

struct ComparisonReport {
  Group group_a;
  Group group_b;
  double abs_diff = 0.0;
  TestResult test;
  double cohen_d = 0.0;
  bool significant = false;  // p < alpha
  double alpha = 0.05;
  std::optional<std::string> note;
  std::map<std::string, SubscaleComparison> per_subscale;
};

ComparisonReport compare_groups(const Group& a, const Group& b,
                                CohenMethod method = CohenMethod::AverageVariance,
                                double alpha = 0.05);

struct DeterministicComparison {
  double reference = 0.0;
  Group group;
  TestResult test;
  std::optional<std::string> note;
};

DeterministicComparison compare_to_reference(double reference, const Group& group);

nlohmann::json to_json(const Summary& s);
nlohmann::json to_json(const Group& g);
nlohmann::json to_json(const ComparisonReport& r);
nlohmann::json to_json(const DeterministicComparison& r);

// "p=0.092" or "p<0.001".
std::string format_p(double p);

// Columns: condition, baseline mean (n, SD), perturbed mean (n, SD),
// absolute difference, significance (p, d), global consistency rate.
std::string format_table(const std::vector<ComparisonReport>& rows,
                         const std::string& title = {});

}  // namespace wlab::analysis
