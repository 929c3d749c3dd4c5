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

#include <chrono>
#include <memory>
#include <string>

#include <json.hpp>

#include "wlab/control/session_registry.hpp"

namespace wlab::control {

// HTTP control surface for the live console.
//
//   POST /sessions                 start (body: SessionSpec JSON) -> 201
//   GET  /sessions                 list
//   GET  /sessions/{id}/state      snapshot; ?limit=N recent events (default 20)
//   GET  /sessions/{id}/events     text/event-stream; resume with Last-Event-ID
//                                  or ?from=SEQ (first seq to deliver)
//   POST /sessions/{id}/stop       202; 409 when finished; 404 unknown
//   GET  /sessions/{id}/log        full session log
//   GET  /health
//
// Errors are {"error": {"code": ..., "message": ...}}.
class ControlServer {
 public:
  explicit ControlServer(SessionRegistry& registry);
  ~ControlServer();

  // Binds and serves on a background thread. port 0 picks a free port.
  // Returns the bound port; throws std::runtime_error when binding fails.
  int start(const std::string& host = "127.0.0.1", int port = 0);
  // Serves on the calling thread until stop().
  void listen_blocking(const std::string& host, int port);
  void stop();
  int port() const { return port_; }

  void set_heartbeat(std::chrono::milliseconds interval) { heartbeat_ = interval; }

 private:
  struct Impl;
  void install_routes();

  SessionRegistry& registry_;
  std::unique_ptr<Impl> impl_;
  int port_ = 0;
  std::chrono::milliseconds heartbeat_{15000};
};

// Snapshot body served by GET /sessions/{id}/state.
nlohmann::json state_snapshot(const SessionRegistry& registry,
                              const SessionRegistry::Entry& entry,
                              std::size_t event_limit);

// One Server-Sent Events frame for an event.
std::string sse_frame(const env::Event& e);

}  // namespace wlab::control
