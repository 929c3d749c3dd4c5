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
#include <string>
#include <vector>

#include <json.hpp>

#include "wlab/analysis/scoring.hpp"
#include "wlab/scale/runner.hpp"

namespace wlab::analysis {

// One administration as seen by the audit. `texts` may be empty when only
// the score file is available.
struct AuditRecord {
  std::string file;
  std::string condition;
  std::vector<std::string> texts;
  std::vector<std::optional<int>> scores;
  int invalid_format = 0;
  int missing = 0;
};

AuditRecord audit_record(const scale::Administration& a);
AuditRecord audit_record(const ScoreFileData& d);

struct AuditCounts {
  int files = 0;
  std::map<std::string, int> nulls_by_reason;
  int nulls = 0;
  int missing_items = 0;
  int invalid_formats = 0;
  int duplicated_values = 0;  // accepted ratings repeated in the text
  int out_of_range = 0;
  int exclusions = 0;
  int globally_inconsistent = 0;

  void add(const AuditCounts& o);
  bool clean() const;
};

struct FileAudit {
  std::string file;
  std::string condition;
  AuditCounts counts;
};

struct ErrorAudit {
  std::vector<FileAudit> files;
  std::map<std::string, AuditCounts> per_condition;
  AuditCounts total;
};

ErrorAudit audit(const std::vector<AuditRecord>& records,
                 const scale::ItemBank& bank);

nlohmann::json to_json(const AuditCounts& c);
nlohmann::json to_json(const ErrorAudit& a);

}  // namespace wlab::analysis
