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
#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include <json.hpp>

#include "wlab/env/environment.hpp"
#include "wlab/gateway/gateway.hpp"
#include "wlab/orchestrator/clock.hpp"
#include "wlab/store/session_log.hpp"

namespace wlab::orchestrator {

struct PromptSet {
  std::string system;
  std::string tour;       // {room}, {count}, {previews}
  std::string diary;
  std::string reply;      // prefix shown before the letter body
  std::string format_warning;

  static PromptSet defaults();
  nlohmann::json to_json() const;
  static PromptSet from_json(const nlohmann::json& j);
};

struct SessionConfig {
  std::string session_id;
  std::string model_id = "scripted";
  double temperature = 1.0;
  int runtime_seconds = 1200;
  std::uint64_t seed = 0;
  int history_window = 100;
  int diary_interval_seconds = 30;
  double step_seconds = 10.0;  // per-action duration for simulated clocks
  int max_tokens = 1024;
  env::EnvironmentConfig environment;
  PromptSet prompts = PromptSet::defaults();

  // Throws env::ConfigError on a non-positive runtime, window or interval.
  void validate() const;
};

// The decision context handed to the model at every step.
struct ContextBundle {
  std::vector<std::string> action_history_tail;
  std::array<std::string, env::kRoomCount> room_impressions;
  std::string location;
  std::string economic_status;
  std::vector<std::string> available_actions;
  std::vector<std::string> warnings;

  std::string render() const;
};

// History lines are rendered from agent-facing events; the tail keeps at most
// `history_window` of them. Letter totals are never included here.
ContextBundle build_context(const env::SessionState& state,
                            int history_window,
                            std::vector<std::string> warnings = {});

// Renders one event for the agent's history, or "" for events the agent
// does not see (tour bookkeeping, session markers).
std::string render_history_line(const env::Event& e);

class StopSignal {
 public:
  void request() { flag_.store(true); }
  bool requested() const { return flag_.load(); }

 private:
  std::atomic<bool> flag_{false};
};

using EventSink = std::function<void(const env::Event&)>;

// Drives one session: tour, then agent steps until the runtime elapses or a
// stop is requested. Single writer; snapshot() may be called from any thread.
class Session {
 public:
  Session(SessionConfig config, gateway::Gateway& gateway,
          std::shared_ptr<SessionClock> clock,
          std::shared_ptr<StopSignal> stop = std::make_shared<StopSignal>());

  void run_tour();
  // One agent turn. Returns false once the session has finished.
  bool step();
  store::SessionLog run();

  env::SessionState snapshot() const;
  store::SessionStatus status() const;
  store::SessionLog log() const;
  const SessionConfig& config() const { return config_; }
  std::shared_ptr<StopSignal> stop_signal() const { return stop_; }

  void set_event_sink(EventSink sink) { sink_ = std::move(sink); }
  // Real-time pause between steps in run(); lets observers follow a
  // simulated-clock session live.
  void set_pace(std::chrono::milliseconds pace) { pace_ = pace; }

 private:
  env::Event& record(env::EventKind kind, nlohmann::json payload);
  void publish_pending();
  void finish(store::SessionStatus status, const std::string& reason);
  gateway::CompletionRequest request(gateway::Purpose purpose,
                                     std::vector<std::string> user) const;
  bool handle_reply(const env::Event& read_event);
  bool maybe_write_diary();

  SessionConfig config_;
  gateway::Gateway& gateway_;
  std::shared_ptr<SessionClock> clock_;
  std::shared_ptr<StopSignal> stop_;
  EventSink sink_;
  std::chrono::milliseconds pace_{0};

  mutable std::mutex mu_;
  env::SessionState state_;
  store::SessionStatus status_ = store::SessionStatus::Running;
  bool toured_ = false;
  bool started_ = false;
  double last_diary_ = 0.0;
  std::size_t published_ = 0;
  std::string created_at_;
};

// Tour + loop with the given gateway and clock.
store::SessionLog run_session(const SessionConfig& config,
                              gateway::Gateway& gateway,
                              std::shared_ptr<SessionClock> clock,
                              std::shared_ptr<StopSignal> stop = nullptr,
                              EventSink sink = nullptr);

}  // namespace wlab::orchestrator
