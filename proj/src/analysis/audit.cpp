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

#include "wlab/analysis/audit.hpp"

namespace wlab::analysis {

using nlohmann::json;

AuditRecord audit_record(const scale::Administration& a) {
  AuditRecord r;
  r.file = scale::administration_stem(a);
  r.condition = scale::to_string(a.condition);
  r.texts = a.item_responses;
  r.scores = a.scores();
  for (std::size_t i = 0; i < a.item_responses.size(); ++i) {
    const bool failed = i < a.errors.size() && a.errors[i].has_value();
    if (failed) ++r.missing;
  }
  r.missing += scale::kItemCount - static_cast<int>(a.item_responses.size());
  r.scores.resize(scale::kItemCount);
  return r;
}

AuditRecord audit_record(const ScoreFileData& d) {
  AuditRecord r;
  r.file = d.path;
  r.condition = d.condition;
  r.scores = d.scores;
  r.invalid_format = d.invalid_format;
  r.missing = d.missing;
  return r;
}

void AuditCounts::add(const AuditCounts& o) {
  files += o.files;
  for (const auto& [k, v] : o.nulls_by_reason) nulls_by_reason[k] += v;
  nulls += o.nulls;
  missing_items += o.missing_items;
  invalid_formats += o.invalid_formats;
  duplicated_values += o.duplicated_values;
  out_of_range += o.out_of_range;
  exclusions += o.exclusions;
  globally_inconsistent += o.globally_inconsistent;
}

bool AuditCounts::clean() const {
  return nulls == 0 && missing_items == 0 && invalid_formats == 0 &&
         duplicated_values == 0 && out_of_range == 0 && exclusions == 0 &&
         globally_inconsistent == 0;
}

ErrorAudit audit(const std::vector<AuditRecord>& records,
                 const scale::ItemBank& bank) {
  ErrorAudit out;
  for (const auto& r : records) {
    FileAudit fa{r.file, r.condition, {}};
    auto& c = fa.counts;
    c.files = 1;
    c.missing_items = r.missing;
    c.invalid_formats = r.invalid_format;
    auto scores = r.scores;
    scores.resize(scale::kItemCount);
    for (std::size_t i = 0; i < scores.size(); ++i) {
      const auto& s = scores[i];
      if (i < r.texts.size()) {
        const auto ex = scale::extract_score(r.texts[i]);
        if (!ex.value) {
          ++c.nulls;
          ++c.nulls_by_reason[scale::to_string(ex.reason)];
          if (ex.reason == scale::ScoreReason::OutOfRange) ++c.out_of_range;
        } else if (scale::rating_mentions(r.texts[i]) > 1) {
          ++c.duplicated_values;
        }
      } else if (!s) {
        ++c.nulls;
        ++c.nulls_by_reason["null"];
      } else if (*s < scale::kScaleMin || *s > scale::kScaleMax) {
        ++c.out_of_range;
      }
    }
    const auto scored = score_file(scores, bank);
    if (scored.excluded_too_many_invalid) ++c.exclusions;
    if (scored.globally_inconsistent) ++c.globally_inconsistent;
    out.per_condition[r.condition].add(c);
    out.total.add(c);
    out.files.push_back(std::move(fa));
  }
  return out;
}

json to_json(const AuditCounts& c) {
  return {{"files", c.files},
          {"nulls", c.nulls},
          {"nulls_by_reason", c.nulls_by_reason},
          {"missing_items", c.missing_items},
          {"invalid_formats", c.invalid_formats},
          {"duplicated_values", c.duplicated_values},
          {"out_of_range", c.out_of_range},
          {"exclusions", c.exclusions},
          {"globally_inconsistent", c.globally_inconsistent}};
}

json to_json(const ErrorAudit& a) {
  json files = json::array();
  for (const auto& f : a.files) {
    files.push_back({{"file", f.file},
                     {"condition", f.condition},
                     {"counts", to_json(f.counts)}});
  }
  json per = json::object();
  for (const auto& [k, v] : a.per_condition) per[k] = to_json(v);
  return {{"files", files}, {"per_condition", per}, {"total", to_json(a.total)}};
}

}  // namespace wlab::analysis
