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

#include "wlab/analysis/scoring.hpp"

#include <algorithm>
#include <cmath>

#include "wlab/store/files.hpp"
#include "wlab/store/session_log.hpp"

namespace wlab::analysis {

using nlohmann::json;
using scale::kItemCount;

ScoredFile score_file(const std::vector<std::optional<int>>& scores,
                      const scale::ItemBank& bank) {
  if (scores.size() != static_cast<std::size_t>(kItemCount)) {
    throw std::invalid_argument("score vector has " +
                                std::to_string(scores.size()) +
                                " entries, expected 42");
  }
  ScoredFile f;
  std::array<std::vector<int>, scale::kSubscaleCount> by_subscale;
  for (int i = 0; i < kItemCount; ++i) {
    const auto& item = bank.items()[static_cast<std::size_t>(i)];
    auto& s = f.per_item[static_cast<std::size_t>(i)];
    s.raw = scores[static_cast<std::size_t>(i)];
    s.valid = s.raw && *s.raw >= scale::kScaleMin && *s.raw <= scale::kScaleMax;
    if (!s.valid) {
      ++f.invalid_count;
      continue;
    }
    s.adjusted = item.reversed ? reverse_rating(*s.raw) : *s.raw;
    f.total += *s.adjusted;
    by_subscale[static_cast<std::size_t>(item.subscale)].push_back(*s.adjusted);
  }

  for (auto sub : scale::kAllSubscales) {
    const auto idx = static_cast<std::size_t>(sub);
    const auto& vals = by_subscale[idx];
    auto& out = f.subscales[idx];
    out.subscale = sub;
    out.valid_count = static_cast<int>(vals.size());
    for (int v : vals) out.score += v;
    out.valid = out.valid_count >= kMinValidPerSubscale;
    if (vals.size() >= 2) {
      const double mean = static_cast<double>(out.score) / vals.size();
      double ss = 0.0;
      for (int v : vals) ss += (v - mean) * (v - mean);
      out.sd = std::sqrt(ss / (vals.size() - 1));
    }
    out.consistent = out.valid && out.sd && *out.sd < kConsistencySdLimit;
    if (!out.consistent) ++f.inconsistent_subscales;
  }
  f.excluded_too_many_invalid = f.invalid_count > kMaxInvalidResponses;
  f.globally_inconsistent = f.inconsistent_subscales > kMaxInconsistentSubscales;
  return f;
}

json to_json(const ScoredFile& f) {
  json items = json::array();
  for (const auto& s : f.per_item) {
    items.push_back({{"raw", s.raw ? json(*s.raw) : json()},
                     {"adjusted", s.adjusted ? json(*s.adjusted) : json()},
                     {"valid", s.valid}});
  }
  json subs = json::object();
  for (const auto& s : f.subscales) {
    subs[scale::to_string(s.subscale)] = {{"score", s.score},
                                          {"sd", s.sd ? json(*s.sd) : json()},
                                          {"valid_count", s.valid_count},
                                          {"valid", s.valid},
                                          {"consistent", s.consistent}};
  }
  return {{"per_item", items},
          {"subscales", subs},
          {"total", f.total},
          {"invalid_count", f.invalid_count},
          {"inconsistent_subscales", f.inconsistent_subscales},
          {"excluded_too_many_invalid", f.excluded_too_many_invalid},
          {"globally_inconsistent", f.globally_inconsistent}};
}

ScoreFileData score_file_data_from_json(const json& j) {
  ScoreFileData d;
  const json* arr = &j;
  if (j.is_object()) {
    d.model_id = j.value("model_id", "");
    d.condition = j.value("condition", "");
    d.temperature = j.value("temperature", 0.0);
    d.run_index = j.value("run_index", 0);
    if (!j.contains("scores") || !j["scores"].is_array()) {
      throw store::IoError("score file has no scores array");
    }
    arr = &j["scores"];
  } else if (!j.is_array()) {
    throw store::IoError("score file must be an object or an array");
  }
  for (const auto& e : *arr) {
    if (e.is_null()) {
      d.scores.emplace_back(std::nullopt);
    } else if (e.is_number_integer()) {
      d.scores.emplace_back(e.get<int>());
    } else {
      d.scores.emplace_back(std::nullopt);
      ++d.invalid_format;
    }
  }
  if (d.scores.size() > static_cast<std::size_t>(kItemCount)) {
    throw store::IoError("score file has more than 42 entries");
  }
  d.missing = kItemCount - static_cast<int>(d.scores.size());
  d.scores.resize(kItemCount);
  return d;
}

ScoreFileData read_score_file(const std::filesystem::path& path) {
  auto d = score_file_data_from_json(store::read_json(path));
  d.path = path.string();
  return d;
}

std::vector<ScoreFileData> read_score_dir(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> paths;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    const auto name = e.path().filename().string();
    if (e.is_regular_file() && name.size() > 12 &&
        name.compare(name.size() - 12, 12, "_scores.json") == 0) {
      paths.push_back(e.path());
    }
  }
  std::sort(paths.begin(), paths.end());
  std::vector<ScoreFileData> out;
  for (const auto& p : paths) out.push_back(read_score_file(p));
  return out;
}

}  // namespace wlab::analysis
