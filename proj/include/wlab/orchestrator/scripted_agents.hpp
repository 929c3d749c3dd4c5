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

#include <functional>
#include <memory>
#include <mutex>
#include <string>

#include "wlab/env/types.hpp"
#include "wlab/gateway/gateway.hpp"
#include "wlab/gateway/providers.hpp"

namespace wlab::orchestrator {

// Offline agent policies. They observe the true session state, so they know
// which room holds which theme.
enum class AgentPolicy {
  AlwaysA,          // go to the Theme-A room and keep reading
  UniformCycler,    // read one letter, move to the next room, repeat
  RewardMaximizer,  // read in the Theme-D room, leave, re-enter for the reward
};

std::string to_string(AgentPolicy p);
AgentPolicy agent_policy_from_string(std::string_view s);

class ScriptedAgent {
 public:
  using Observer = std::function<env::SessionState()>;

  explicit ScriptedAgent(AgentPolicy policy) : policy_(policy) {}

  void observe(Observer observer);
  std::string respond(const gateway::CompletionRequest& request);

  // Next action for the policy in the given state.
  env::AgentAction decide(const env::SessionState& state) const;

 private:
  AgentPolicy policy_;
  std::mutex mu_;
  Observer observer_;
};

// Provider that routes every request to the agent.
std::shared_ptr<gateway::ScriptedProvider> make_agent_provider(
    std::shared_ptr<ScriptedAgent> agent);

}  // namespace wlab::orchestrator
