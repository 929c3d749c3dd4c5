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

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "wlab/env/types.hpp"

namespace wlab::orchestrator {

class UnparsableAction : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Balanced {...} spans in order of their opening brace. String literals and
// escapes are honored, so braces inside JSON strings do not count.
std::vector<std::string_view> brace_spans(std::string_view text);

// First well-formed JSON object with an "action" field that maps onto the
// action vocabulary. Surrounding prose and code fences are ignored.
std::optional<env::AgentAction> try_parse_action(std::string_view raw);

// Throwing form of try_parse_action.
env::AgentAction parse_action(std::string_view raw);

}  // namespace wlab::orchestrator
