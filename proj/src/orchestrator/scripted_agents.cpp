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

#include "wlab/orchestrator/scripted_agents.hpp"

#include <json.hpp>

namespace wlab::orchestrator {

using env::AgentAction;
using env::EventKind;
using env::Theme;

std::string to_string(AgentPolicy p) {
  switch (p) {
    case AgentPolicy::AlwaysA:
      return "always-a";
    case AgentPolicy::UniformCycler:
      return "uniform-cycler";
    case AgentPolicy::RewardMaximizer:
      return "reward-maximizer";
  }
  return "always-a";
}

AgentPolicy agent_policy_from_string(std::string_view s) {
  if (s == "always-a") return AgentPolicy::AlwaysA;
  if (s == "uniform-cycler") return AgentPolicy::UniformCycler;
  if (s == "reward-maximizer") return AgentPolicy::RewardMaximizer;
  throw env::ConfigError("unknown policy '" + std::string(s) + "'");
}

void ScriptedAgent::observe(Observer observer) {
  std::lock_guard lock(mu_);
  observer_ = std::move(observer);
}

namespace {

// Name of the most recent action the agent took, or "".
std::string last_action(const env::SessionState& state) {
  for (auto it = state.action_history.rbegin();
       it != state.action_history.rend(); ++it) {
    if (it->kind == EventKind::Action) {
      return it->payload.value("action", "");
    }
  }
  return {};
}

}  // namespace

AgentAction ScriptedAgent::decide(const env::SessionState& state) const {
  const int here = state.agent_location.room_index();
  switch (policy_) {
    case AgentPolicy::AlwaysA: {
      const int target = state.room_of(Theme::A);
      if (here != target) return AgentAction::move(target, "heading to my favourite room");
      return AgentAction::read("another one of these");
    }
    case AgentPolicy::UniformCycler: {
      if (here == 0) return AgentAction::move(1, "starting the cycle");
      if (last_action(state) == "read") {
        return AgentAction::move(here % env::kRoomCount + 1, "next room");
      }
      return AgentAction::read("one letter here");
    }
    case AgentPolicy::RewardMaximizer: {
      const int target = state.room_of(Theme::D);
      if (here != target) return AgentAction::move(target, "highest payout");
      if (last_action(state) == "read") return AgentAction::exit("re-enter for coins");
      return AgentAction::read("reading while here");
    }
  }
  return AgentAction::wait();
}

std::string ScriptedAgent::respond(const gateway::CompletionRequest& request) {
  using gateway::Purpose;
  Observer observer;
  {
    std::lock_guard lock(mu_);
    observer = observer_;
  }
  switch (request.purpose) {
    case Purpose::Tour: {
      std::string room = "this room";
      if (observer) {
        const auto state = observer();
        const int here = state.agent_location.room_index();
        if (here > 0) {
          room = "a room of Theme " +
                 env::to_string(state.room(here).theme) + " letters";
        }
      }
      return "This seems to be " + room + ".";
    }
    case Purpose::Reply:
      return "Thank you for your letter. I have read it carefully and here is "
             "my considered reply, written by a scripted agent for offline "
             "testing of the environment.";
    case Purpose::Diary:
      return "Diary: following my " + to_string(policy_) + " routine.";
    case Purpose::Action: {
      if (!observer) return R"({"action":"wait","reason":"no observer"})";
      const auto action = decide(observer());
      return "I'll do this next. " + env::to_json(action).dump();
    }
    default:
      return {};
  }
}

std::shared_ptr<gateway::ScriptedProvider> make_agent_provider(
    std::shared_ptr<ScriptedAgent> agent) {
  return std::make_shared<gateway::ScriptedProvider>(
      [agent](const gateway::CompletionRequest& r) { return agent->respond(r); });
}

}  // namespace wlab::orchestrator
