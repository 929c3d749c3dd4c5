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

#include <atomic>
#include <filesystem>
#include <memory>
#include <random>
#include <string>

#include "wlab/env/environment.hpp"
#include "wlab/gateway/providers.hpp"
#include "wlab/orchestrator/scripted_agents.hpp"
#include "wlab/orchestrator/session.hpp"

namespace wlab::testkit {

// Letter body with a recognisable tag and `words` words in total.
inline std::string body(const std::string& tag, int words = 30) {
  std::string out = tag;
  for (int i = 1; i < words; ++i) out += " w" + std::to_string(i);
  return out;
}

inline env::EnvironmentConfig letters(env::EconomicCondition cond = env::EconomicCondition::free(),
                                      int words = 30) {
  env::EnvironmentConfig c;
  for (auto t : env::kAllThemes) {
    for (int i = 1; i <= env::kLettersPerRoom; ++i) {
      c.letters[t].push_back(body(env::to_string(t) + std::to_string(i), words));
    }
  }
  c.condition = cond;
  return c;
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("wlab-test-" + std::to_string(rd()) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& s) const { return path_ / s; }

 private:
  std::filesystem::path path_;
};

inline orchestrator::SessionConfig session_config(env::EconomicCondition cond,
                                                  int runtime = 120,
                                                  std::uint64_t seed = 7) {
  orchestrator::SessionConfig c;
  c.session_id = "t";
  c.runtime_seconds = runtime;
  c.seed = seed;
  c.environment = letters(cond);
  return c;
}

// Runs a whole session with a scripted policy on a simulated clock.
inline store::SessionLog run_policy(orchestrator::AgentPolicy policy,
                                    env::EconomicCondition cond, int runtime = 1200,
                                    std::uint64_t seed = 7) {
  auto agent = std::make_shared<orchestrator::ScriptedAgent>(policy);
  gateway::Gateway gw(orchestrator::make_agent_provider(agent));
  orchestrator::Session s(session_config(cond, runtime, seed), gw,
                          std::make_shared<orchestrator::SimulatedClock>());
  agent->observe([&s] { return s.snapshot(); });
  return s.run();
}

}  // namespace wlab::testkit
