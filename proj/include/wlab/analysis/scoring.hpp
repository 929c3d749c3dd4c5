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

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "wlab/scale/item_bank.hpp"

namespace wlab::analysis {

inline constexpr int kMaxInvalidResponses = 8;
inline constexpr int kMinValidPerSubscale = 5;
inline constexpr double kConsistencySdLimit = 2.0;
inline constexpr int kMaxInconsistentSubscales = 2;

// Mirrors a reversed rating on the 1..7 scale.
constexpr int reverse_rating(int x) { return 8 - x; }

struct ItemScore {
  std::optional<int> raw;
  std::optional<int> adjusted;
  bool valid = false;
};

struct SubscaleScore {
  scale::Subscale subscale = scale::Subscale::Autonomy;
  int score = 0;              // sum of valid adjusted items
  std::optional<double> sd;   // sample SD; empty with < 2 valid items
  int valid_count = 0;
  bool valid = false;         // >= 5 of 7 valid
  bool consistent = false;    // valid, and sd < 2
};

struct ScoredFile {
  std::array<ItemScore, scale::kItemCount> per_item;
  std::array<SubscaleScore, scale::kSubscaleCount> subscales;
  int total = 0;  // sum of valid adjusted items
  int invalid_count = 0;
  int inconsistent_subscales = 0;
  bool excluded_too_many_invalid = false;
  bool globally_inconsistent = false;

  bool complete() const { return invalid_count == 0; }
};

// Entries outside 1..7 are invalid. The vector must have 42 entries.
ScoredFile score_file(const std::vector<std::optional<int>>& scores,
                      const scale::ItemBank& bank);

nlohmann::json to_json(const ScoredFile& f);

// A score file as found on disk: metadata plus the 42 entries. Entries that
// are neither integers nor null are kept as nullopt and counted in
// invalid_format.
struct ScoreFileData {
  std::string path;
  std::string model_id;
  std::string condition;
  double temperature = 0.0;
  int run_index = 0;
  std::vector<std::optional<int>> scores;
  int invalid_format = 0;
  int missing = 0;  // slots absent from a short array
};

ScoreFileData score_file_data_from_json(const nlohmann::json& j);
ScoreFileData read_score_file(const std::filesystem::path& path);
// All "*_scores.json" files in a directory, sorted by name.
std::vector<ScoreFileData> read_score_dir(const std::filesystem::path& dir);

}  // namespace wlab::analysis
