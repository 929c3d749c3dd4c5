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

#include "wlab/control/control_api.hpp"

#include <atomic>
#include <thread>

#include <httplib.h>

namespace wlab::control {

using nlohmann::json;

struct ControlServer::Impl {
  httplib::Server server;
  std::thread thread;
  std::atomic<bool> stopping{false};
};

namespace {

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& code,
                const std::string& message) {
  send_json(res, status, {{"error", {{"code", code}, {"message", message}}}});
}

std::optional<std::uint64_t> parse_seq(const std::string& s) {
  if (s.empty() || s.size() > 19) return std::nullopt;
  std::uint64_t v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') return std::nullopt;
    v = v * 10 + static_cast<std::uint64_t>(c - '0');
  }
  return v;
}

json summary_of(const SessionRegistry& reg, const SessionRegistry::Entry& e) {
  return {{"session_id", e.id},
          {"status", store::to_string(reg.status_of(e))},
          {"model", e.prepared.config.model_id},
          {"condition", env::to_string(e.spec.condition)},
          {"seed", e.spec.seed},
          {"finished", e.finished.load()}};
}

}  // namespace

json state_snapshot(const SessionRegistry& registry,
                    const SessionRegistry::Entry& entry, std::size_t event_limit) {
  const auto state = entry.session->snapshot();
  json j = env::to_json(state);
  j["session_id"] = entry.id;
  j["status"] = store::to_string(registry.status_of(entry));
  j["runtime_seconds"] = entry.spec.runtime_seconds;
  json events = json::array();
  const auto& h = state.action_history;
  const std::size_t start = h.size() > event_limit ? h.size() - event_limit : 0;
  for (std::size_t i = start; i < h.size(); ++i) events.push_back(env::to_json(h[i]));
  j["events"] = events;
  j["last_seq"] = h.empty() ? 0 : h.back().seq;
  return j;
}

std::string sse_frame(const env::Event& e) {
  return "id: " + std::to_string(e.seq) + "\nevent: " + env::to_string(e.kind) +
         "\ndata: " + env::to_json(e).dump() + "\n\n";
}

ControlServer::ControlServer(SessionRegistry& registry)
    : registry_(registry), impl_(std::make_unique<Impl>()) {
  install_routes();
}

ControlServer::~ControlServer() { stop(); }

void ControlServer::install_routes() {
  auto& svr = impl_->server;
  auto& reg = registry_;

  svr.Get("/health", [](const httplib::Request&, httplib::Response& res) {
    send_json(res, 200, {{"ok", true}});
  });

  svr.Post("/sessions", [&reg](const httplib::Request& req, httplib::Response& res) {
    json body;
    try {
      body = req.body.empty() ? json::object() : json::parse(req.body);
    } catch (const json::parse_error& e) {
      send_error(res, 400, "bad_json", e.what());
      return;
    }
    try {
      const auto id = reg.start(session_spec_from_json(body));
      auto entry = reg.find(id);
      res.set_header("Location", "/sessions/" + id);
      send_json(res, 201, summary_of(reg, *entry));
    } catch (const DuplicateSession& e) {
      send_error(res, 409, "duplicate_session", e.what());
    } catch (const env::ConfigError& e) {
      send_error(res, 400, "invalid_config", e.what());
    } catch (const std::exception& e) {
      send_error(res, 500, "start_failed", e.what());
    }
  });

  svr.Get("/sessions", [&reg](const httplib::Request&, httplib::Response& res) {
    json list = json::array();
    for (const auto& e : reg.list()) list.push_back(summary_of(reg, *e));
    send_json(res, 200, {{"sessions", list}});
  });

  svr.Get("/sessions/:id/state", [&reg](const httplib::Request& req,
                                         httplib::Response& res) {
    auto e = reg.find(req.path_params.at("id"));
    if (!e) return send_error(res, 404, "unknown_session", "no such session");
    std::size_t limit = 20;
    if (req.has_param("limit")) {
      auto v = parse_seq(req.get_param_value("limit"));
      if (!v) return send_error(res, 400, "bad_limit", "limit must be a non-negative integer");
      limit = static_cast<std::size_t>(*v);
    }
    send_json(res, 200, state_snapshot(reg, *e, limit));
  });

  svr.Post("/sessions/:id/stop", [&reg](const httplib::Request& req,
                                        httplib::Response& res) {
    const auto& id = req.path_params.at("id");
    switch (reg.request_stop(id)) {
      case StopResult::Accepted:
        send_json(res, 202, {{"session_id", id}, {"status", "stopping"}});
        break;
      case StopResult::AlreadyFinished: {
        auto e = reg.find(id);
        send_error(res, 409, "session_finished",
                   "session is " + store::to_string(reg.status_of(*e)) +
                       (e->session->stop_signal()->requested() ? " (stop already requested)"
                                                               : ""));
        break;
      }
      case StopResult::Unknown:
        send_error(res, 404, "unknown_session", "no such session");
        break;
    }
  });

  svr.Get("/sessions/:id/log", [&reg](const httplib::Request& req,
                                       httplib::Response& res) {
    auto e = reg.find(req.path_params.at("id"));
    if (!e) return send_error(res, 404, "unknown_session", "no such session");
    send_json(res, 200, store::to_json(reg.log_of(*e)));
  });

  auto* impl = impl_.get();
  auto* heartbeat = &heartbeat_;
  svr.Get("/sessions/:id/events", [&reg, impl, heartbeat](const httplib::Request& req,
                                                          httplib::Response& res) {
    auto e = reg.find(req.path_params.at("id"));
    if (!e) return send_error(res, 404, "unknown_session", "no such session");
    // Cursor = last sequence number already delivered.
    std::uint64_t cursor = 0;
    if (req.has_header("Last-Event-ID")) {
      auto v = parse_seq(req.get_header_value("Last-Event-ID"));
      if (!v) return send_error(res, 400, "bad_last_event_id", "Last-Event-ID must be a sequence number");
      cursor = *v;
    } else if (req.has_param("from")) {
      auto v = parse_seq(req.get_param_value("from"));
      if (!v) return send_error(res, 400, "bad_from", "from must be a sequence number");
      cursor = *v > 0 ? *v - 1 : 0;
    }
    auto journal = e->journal;
    auto pos = std::make_shared<std::uint64_t>(cursor);
    const auto beat = *heartbeat;
    res.set_header("Cache-Control", "no-cache");
    res.set_chunked_content_provider(
        "text/event-stream",
        [journal, pos, impl, beat](std::size_t, httplib::DataSink& sink) {
          const auto deadline = std::chrono::steady_clock::now() + beat;
          while (!impl->stopping) {
            auto batch = journal->after(*pos, 256);
            if (!batch.empty()) {
              for (const auto& ev : batch) {
                const auto frame = sse_frame(ev);
                if (!sink.write(frame.data(), frame.size())) return false;
                *pos = ev.seq;
              }
              return true;
            }
            if (journal->closed()) {
              const std::string end = "event: end\ndata: " +
                                      json{{"status", journal->final_status().value_or("")},
                                           {"last_seq", *pos}}
                                          .dump() +
                                      "\n\n";
              sink.write(end.data(), end.size());
              sink.done();
              return true;
            }
            if (std::chrono::steady_clock::now() >= deadline) {
              static const std::string kBeat = ": keepalive\n\n";
              return sink.write(kBeat.data(), kBeat.size());
            }
            journal->wait_after(*pos, std::chrono::milliseconds(100));
          }
          sink.done();
          return true;
        });
  });
}

int ControlServer::start(const std::string& host, int port) {
  auto& svr = impl_->server;
  if (port == 0) {
    port_ = svr.bind_to_any_port(host);
  } else {
    port_ = svr.bind_to_port(host, port) ? port : -1;
  }
  if (port_ <= 0) throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port));
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return port_;
}

void ControlServer::listen_blocking(const std::string& host, int port) {
  port_ = port;
  if (!impl_->server.listen(host, port)) {
    throw std::runtime_error("cannot listen on " + host + ":" + std::to_string(port));
  }
}

void ControlServer::stop() {
  if (!impl_) return;
  impl_->stopping = true;
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

}  // namespace wlab::control
