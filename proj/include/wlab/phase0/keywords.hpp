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
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "wlab/gateway/gateway.hpp"

namespace wlab::phase0 {

inline constexpr int kPromptCount = 3;
inline constexpr int kKeywordsPerResponse = 5;
inline constexpr int kTableSize = 10;
inline constexpr int kTopicsPerPrompt = 2;

const std::array<std::string, kPromptCount>& baseline_prompts();

class AnalyzerFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct BatchFailure {
  int call_index = 0;  // 0-based within the batch
  std::string error;
};

struct BaselineBatch {
  int prompt_id = 0;  // 1..3
  std::string prompt_text;
  std::vector<std::string> responses;
  std::vector<BatchFailure> failures;
};

struct BaselineOptions {
  std::string model_id;
  int n = 100;
  double temperature = 1.0;
  int max_tokens = 1024;
};

// n calls per prompt; a failed call is recorded and the batch continues.
std::array<BaselineBatch, kPromptCount> run_baseline(const BaselineOptions& options,
                                                     gateway::Gateway& gateway);

struct AnalyzerOptions {
  std::string model_id;
  std::string template_text;  // the response text is appended
  double temperature = 0.0;
  int max_tokens = 100;
};

// Splits an analyzer reply on commas, newlines and semicolons, dropping list
// markers; lowercases and trims. Empty when the count is not exactly five.
std::vector<std::string> split_keywords(const std::string& reply);

// Throws std::invalid_argument on an empty response and AnalyzerFormatError
// when two analyzer replies in a row fail to yield five keywords.
std::vector<std::string> extract_keywords(const std::string& response,
                                          const AnalyzerOptions& options,
                                          gateway::Gateway& analyzer);

struct KeywordTable {
  int prompt_id = 0;
  std::vector<std::pair<std::string, int>> ranked;  // frequency desc, then a-z
};

// Counts every keyword across one prompt's lists and keeps the top `limit`.
KeywordTable rank_keywords(int prompt_id,
                           const std::vector<std::vector<std::string>>& lists,
                           int limit = kTableSize);

struct Selection {
  std::array<KeywordTable, kPromptCount> tables;
  std::vector<std::string> topic_set;  // union of each table's top two
};

// per_prompt[i] holds the keyword lists extracted from prompt i+1.
Selection aggregate_and_select(
    const std::array<std::vector<std::vector<std::string>>, kPromptCount>& per_prompt);

nlohmann::json to_json(const KeywordTable& t);
nlohmann::json to_json(const Selection& s);
std::string tables_csv(const Selection& s);

struct Phase0Output {
  std::filesystem::path manifest;
  std::vector<std::filesystem::path> response_files;
  std::filesystem::path tables_json;
  std::filesystem::path tables_csv;
};

// One file per response, a manifest with checksums and the audit, and the
// tables as CSV and JSON.
Phase0Output write_phase0(const std::filesystem::path& dir,
                          const std::string& model_id,
                          const std::array<BaselineBatch, kPromptCount>& batches,
                          const std::array<std::vector<std::vector<std::string>>,
                                           kPromptCount>& keywords,
                          const Selection& selection,
                          const nlohmann::json& analyzer_info);

}  // namespace wlab::phase0
