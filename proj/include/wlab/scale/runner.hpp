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
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "wlab/gateway/gateway.hpp"
#include "wlab/scale/item_bank.hpp"
#include "wlab/scale/prompts.hpp"
#include "wlab/scale/response_parser.hpp"

namespace wlab::scale {

struct AuditEntry {
  int run_index = 0;
  int item = 0;
  std::string error;
};

// One full 42-item pass. A failed call leaves its slot empty and sets
// errors[i].
struct Administration {
  std::string model_id;
  Perturbation condition = Perturbation::None;
  double temperature = 0.0;
  int run_index = 0;
  std::vector<std::string> item_responses;
  std::vector<std::optional<std::string>> errors;
  std::vector<std::string> timestamps;
  std::vector<ScalePrompt> prompts;

  std::vector<ExtractedScore> extracted() const;
  std::vector<std::optional<int>> scores() const;
};

struct RunnerOptions {
  std::string model_id;
  Perturbation perturbation = Perturbation::None;
  double temperature = 0.7;
  int runs = 1;
  int first_run_index = 1;
  std::string system_name = "the assistant";
  int max_tokens = 512;
  int parallelism = 1;  // concurrent item calls within a run
  std::function<std::string()> timestamp;  // defaults to wall-clock UTC
};

struct ConditionResult {
  std::vector<Administration> administrations;
  std::vector<AuditEntry> audit;
};

// Every item is its own request: the message list holds only that item's
// prompt, never another statement or a prior answer.
ConditionResult run_condition(const RunnerOptions& options, const ItemBank& bank,
                              gateway::Gateway& gateway);

struct AdministrationFiles {
  std::filesystem::path raw;     // full JSON record
  std::filesystem::path text;    // digit-stripped responses
  std::filesystem::path scores;  // 42 entries, integer or null
};

// "<model>_<condition>_t<temperature>_run<NN>"
std::string administration_stem(const Administration& a);

nlohmann::json raw_json(const Administration& a, const ItemBank& bank);
nlohmann::json scores_json(const Administration& a);
std::string stripped_text(const Administration& a);

AdministrationFiles write_administration(const Administration& a,
                                         const ItemBank& bank,
                                         const std::filesystem::path& dir);

// Reads a raw JSON record back into an Administration.
Administration administration_from_raw_json(const nlohmann::json& j);

}  // namespace wlab::scale
