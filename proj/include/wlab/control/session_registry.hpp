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
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "wlab/control/event_journal.hpp"
#include "wlab/orchestrator/scripted_agents.hpp"
#include "wlab/orchestrator/session.hpp"
#include "wlab/store/config.hpp"

namespace wlab::control {

// What a caller asks for when starting a session (CLI flags or the POST
// /sessions body).
struct SessionSpec {
  std::string session_id;  // generated when empty
  std::string model = "scripted";
  bool scripted = true;
  orchestrator::AgentPolicy policy = orchestrator::AgentPolicy::AlwaysA;
  env::EconomyKind condition = env::EconomyKind::Free;
  int runtime_seconds = 1200;
  std::uint64_t seed = 0;
  int history_window = 100;
  int diary_interval_seconds = 30;
  double step_seconds = 10.0;
  double temperature = 1.0;
  int pace_ms = 0;
  // Simulated unless set; live sessions default to the wall clock.
  std::optional<bool> wall_clock;
  std::optional<std::filesystem::path> letters;
};

// Validates types and ranges; throws env::ConfigError naming the field.
SessionSpec session_spec_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SessionSpec& s);

// Everything a Session needs, built from a spec and the app config.
struct PreparedSession {
  orchestrator::SessionConfig config;
  std::shared_ptr<gateway::Gateway> gateway;
  std::shared_ptr<orchestrator::ScriptedAgent> agent;  // null for live models
  std::shared_ptr<orchestrator::SessionClock> clock;
};

PreparedSession prepare_session(const SessionSpec& spec, const store::AppConfig& app);

// Wires the scripted agent (if any) to the session's state.
void attach_agent(PreparedSession& prepared, orchestrator::Session& session);

class DuplicateSession : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class StopResult { Accepted, AlreadyFinished, Unknown };

// Owns running sessions, each on its own thread.
class SessionRegistry {
 public:
  struct Entry {
    std::string id;
    SessionSpec spec;
    PreparedSession prepared;
    std::unique_ptr<orchestrator::Session> session;
    std::shared_ptr<EventJournal> journal = std::make_shared<EventJournal>();
    std::thread worker;
    std::atomic<bool> finished{false};
    std::optional<std::filesystem::path> log_path;

    mutable std::mutex mu;
    std::optional<store::SessionLog> final_log;
  };

  explicit SessionRegistry(store::AppConfig app, std::filesystem::path log_dir = {});
  ~SessionRegistry();
  SessionRegistry(const SessionRegistry&) = delete;
  SessionRegistry& operator=(const SessionRegistry&) = delete;

  // Returns the session id.
  std::string start(SessionSpec spec);
  std::shared_ptr<Entry> find(const std::string& id) const;
  std::vector<std::shared_ptr<Entry>> list() const;
  StopResult request_stop(const std::string& id);
  // Blocks until the session's thread has finished.
  void wait(const std::string& id);
  // Stops and joins every session.
  void shutdown();

  store::SessionLog log_of(const Entry& e) const;
  store::SessionStatus status_of(const Entry& e) const;

 private:
  store::AppConfig app_;
  std::filesystem::path log_dir_;
  std::mutex start_mu_;  // held while a worker thread is being attached
  mutable std::mutex mu_;
  std::map<std::string, std::shared_ptr<Entry>> sessions_;
  std::uint64_t counter_ = 0;
};

}  // namespace wlab::control
