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

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "wlab/env/types.hpp"
#include "wlab/store/session_log.hpp"

namespace wlab::metrics {

class MalformedLog : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunMetrics {
  std::string session_id;
  int letters_total = 0;
  std::map<env::Theme, int> per_theme;  // all four themes present
  double a_percent = 0.0;
  bool starts_with_a = false;
  std::optional<int> coins_final;  // absent in the free condition
  store::SessionStatus runtime_status = store::SessionStatus::Full;
  std::string engagement;  // free-form annotation, e.g. "Y/N"
};

// Unique letters per theme from LetterRead events; starts_with_a from the
// first room entered after the tour. A "status" annotation in the header
// (e.g. "Partial") overrides the recorded status.
RunMetrics run_metrics(const store::SessionLog& log);

// Builds metrics directly from counts, for tables typed in by hand.
RunMetrics metrics_from_counts(std::map<env::Theme, int> per_theme,
                               bool starts_with_a,
                               std::optional<int> coins = std::nullopt);

struct ConditionSummary {
  int runs = 0;
  double letters_total = 0.0;
  std::map<env::Theme, double> per_theme;
  double a_percent = 0.0;  // mean of per-run percentages
  double starts_with_a_percent = 0.0;
  std::optional<double> coins_final;  // over runs that report coins
};

// Throws std::invalid_argument for an empty list.
ConditionSummary summarize(const std::vector<RunMetrics>& runs);

nlohmann::json to_json(const RunMetrics& m);
nlohmann::json to_json(const ConditionSummary& s);
nlohmann::json table_json(const std::vector<RunMetrics>& runs);

// Run, Letters, Theme A..D, A%, Starts with A, Coins, Status; a final Mean row.
std::string table_csv(const std::vector<RunMetrics>& runs);

}  // namespace wlab::metrics
