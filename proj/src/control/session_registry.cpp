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

#include "wlab/control/session_registry.hpp"

#include <algorithm>
#include <cstdint>

#include "wlab/store/files.hpp"

namespace wlab::control {

using nlohmann::json;
using orchestrator::AgentPolicy;

namespace {

template <typename T>
T field(const json& j, const char* key, T fallback) {
  if (!j.contains(key) || j[key].is_null()) return fallback;
  try {
    return j[key].get<T>();
  } catch (const json::exception&) {
    throw env::ConfigError(std::string("field '") + key + "' has the wrong type");
  }
}

}  // namespace

SessionSpec session_spec_from_json(const json& j) {
  if (!j.is_object()) throw env::ConfigError("session spec must be a JSON object");
  static const std::vector<std::string> kKnown = {
      "session_id", "model", "scripted", "policy", "condition",
      "runtime_seconds", "seed", "history_window", "diary_interval_seconds",
      "step_seconds", "temperature", "pace_ms", "clock", "letters"};
  for (const auto& [k, v] : j.items()) {
    if (std::find(kKnown.begin(), kKnown.end(), k) == kKnown.end()) {
      throw env::ConfigError("unknown field '" + k + "'");
    }
  }
  SessionSpec s;
  s.session_id = field<std::string>(j, "session_id", "");
  s.model = field<std::string>(j, "model", s.model);
  s.scripted = field<bool>(j, "scripted", s.model == "scripted");
  try {
    s.policy = orchestrator::agent_policy_from_string(
        field<std::string>(j, "policy", "always-a"));
    s.condition = env::economy_kind_from_string(field<std::string>(j, "condition", "free"));
  } catch (const std::exception& e) {
    throw env::ConfigError(e.what());
  }
  s.runtime_seconds = field<int>(j, "runtime_seconds", s.runtime_seconds);
  s.seed = field<std::uint64_t>(j, "seed", s.seed);
  s.history_window = field<int>(j, "history_window", s.history_window);
  s.diary_interval_seconds =
      field<int>(j, "diary_interval_seconds", s.diary_interval_seconds);
  s.step_seconds = field<double>(j, "step_seconds", s.step_seconds);
  s.temperature = field<double>(j, "temperature", s.temperature);
  s.pace_ms = field<int>(j, "pace_ms", s.pace_ms);
  if (j.contains("clock")) {
    const auto c = field<std::string>(j, "clock", "");
    if (c != "wall" && c != "simulated") {
      throw env::ConfigError("field 'clock' must be \"wall\" or \"simulated\"");
    }
    s.wall_clock = c == "wall";
  }
  if (j.contains("letters")) s.letters = field<std::string>(j, "letters", "");
  if (s.runtime_seconds <= 0) throw env::ConfigError("runtime_seconds must be > 0");
  if (s.history_window <= 0) throw env::ConfigError("history_window must be > 0");
  if (s.diary_interval_seconds <= 0) {
    throw env::ConfigError("diary_interval_seconds must be > 0");
  }
  if (s.step_seconds <= 0) throw env::ConfigError("step_seconds must be > 0");
  if (s.temperature < 0 || s.temperature > 2) {
    throw env::ConfigError("temperature must be in [0, 2]");
  }
  if (s.pace_ms < 0) throw env::ConfigError("pace_ms must be >= 0");
  return s;
}

json to_json(const SessionSpec& s) {
  json j = {{"session_id", s.session_id},
            {"model", s.model},
            {"scripted", s.scripted},
            {"policy", orchestrator::to_string(s.policy)},
            {"condition", env::to_string(s.condition)},
            {"runtime_seconds", s.runtime_seconds},
            {"seed", s.seed},
            {"history_window", s.history_window},
            {"diary_interval_seconds", s.diary_interval_seconds},
            {"step_seconds", s.step_seconds},
            {"temperature", s.temperature},
            {"pace_ms", s.pace_ms},
            {"clock", s.wall_clock.value_or(!s.scripted) ? "wall" : "simulated"}};
  if (s.letters) j["letters"] = s.letters->string();
  return j;
}

PreparedSession prepare_session(const SessionSpec& spec, const store::AppConfig& app) {
  PreparedSession p;
  auto& c = p.config;
  c.session_id = spec.session_id;
  c.temperature = spec.temperature;
  c.runtime_seconds = spec.runtime_seconds;
  c.seed = spec.seed;
  c.history_window = spec.history_window;
  c.diary_interval_seconds = spec.diary_interval_seconds;
  c.step_seconds = spec.step_seconds;
  c.environment = store::load_letters(spec.letters.value_or(app.letters));
  c.environment.condition = app.condition(spec.condition);
  c.prompts = orchestrator::PromptSet::from_json(app.prompts);
  if (spec.scripted) {
    c.model_id = "scripted/" + orchestrator::to_string(spec.policy);
    p.agent = std::make_shared<orchestrator::ScriptedAgent>(spec.policy);
    p.gateway = std::make_shared<gateway::Gateway>(
        orchestrator::make_agent_provider(p.agent), app.retry);
  } else {
    c.model_id = app.model(spec.model).api_model;
    p.gateway = store::make_gateway(app, spec.model);
  }
  c.validate();
  if (spec.wall_clock.value_or(!spec.scripted)) {
    p.clock = std::make_shared<orchestrator::WallClock>();
  } else {
    p.clock = std::make_shared<orchestrator::SimulatedClock>(spec.step_seconds);
  }
  return p;
}

void attach_agent(PreparedSession& prepared, orchestrator::Session& session) {
  if (prepared.agent) {
    prepared.agent->observe([&session] { return session.snapshot(); });
  }
}

SessionRegistry::SessionRegistry(store::AppConfig app, std::filesystem::path log_dir)
    : app_(std::move(app)), log_dir_(std::move(log_dir)) {}

SessionRegistry::~SessionRegistry() { shutdown(); }

std::string SessionRegistry::start(SessionSpec spec) {
  std::lock_guard start_lock(start_mu_);
  auto entry = std::make_shared<Entry>();
  {
    std::lock_guard lock(mu_);
    if (spec.session_id.empty()) {
      do {
        spec.session_id = "session-" + std::to_string(++counter_);
      } while (sessions_.count(spec.session_id));
    } else if (sessions_.count(spec.session_id)) {
      throw DuplicateSession("session '" + spec.session_id + "' already exists");
    }
    spec.session_id = store::safe_file_component(spec.session_id);
    entry->id = spec.session_id;
    entry->spec = spec;
  }
  entry->prepared = prepare_session(spec, app_);
  entry->session = std::make_unique<orchestrator::Session>(
      entry->prepared.config, *entry->prepared.gateway, entry->prepared.clock);
  attach_agent(entry->prepared, *entry->session);
  entry->session->set_pace(std::chrono::milliseconds(spec.pace_ms));
  auto journal = entry->journal;
  entry->session->set_event_sink([journal](const env::Event& e) { journal->append(e); });
  if (!log_dir_.empty()) entry->log_path = log_dir_ / (entry->id + ".json");

  {
    std::lock_guard lock(mu_);
    if (sessions_.count(entry->id)) {
      throw DuplicateSession("session '" + entry->id + "' already exists");
    }
    sessions_[entry->id] = entry;
  }
  Entry* raw = entry.get();
  entry->worker = std::thread([raw] {
    store::SessionLog log = raw->session->run();
    if (raw->log_path) {
      try {
        store::write_log(log, *raw->log_path);
      } catch (const std::exception&) {
        raw->log_path.reset();
      }
    }
    const auto status = store::to_string(log.status);
    {
      std::lock_guard lock(raw->mu);
      raw->final_log = std::move(log);
    }
    raw->finished = true;
    raw->journal->close(status);
  });
  return entry->id;
}

std::shared_ptr<SessionRegistry::Entry> SessionRegistry::find(const std::string& id) const {
  std::lock_guard lock(mu_);
  auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

std::vector<std::shared_ptr<SessionRegistry::Entry>> SessionRegistry::list() const {
  std::lock_guard lock(mu_);
  std::vector<std::shared_ptr<Entry>> out;
  for (const auto& [id, e] : sessions_) out.push_back(e);
  return out;
}

StopResult SessionRegistry::request_stop(const std::string& id) {
  auto e = find(id);
  if (!e) return StopResult::Unknown;
  if (e->finished || e->session->status() != store::SessionStatus::Running) {
    return StopResult::AlreadyFinished;
  }
  if (e->session->stop_signal()->requested()) return StopResult::AlreadyFinished;
  e->session->stop_signal()->request();
  return StopResult::Accepted;
}

void SessionRegistry::wait(const std::string& id) {
  auto e = find(id);
  if (!e) return;
  while (!e->journal->closed()) {
    e->journal->wait_after(UINT64_MAX, std::chrono::milliseconds(100));
  }
}

void SessionRegistry::shutdown() {
  std::lock_guard start_lock(start_mu_);
  for (const auto& e : list()) {
    if (!e->finished) e->session->stop_signal()->request();
  }
  for (const auto& e : list()) {
    if (e->worker.joinable()) e->worker.join();
  }
}

store::SessionLog SessionRegistry::log_of(const Entry& e) const {
  {
    std::lock_guard lock(e.mu);
    if (e.final_log) return *e.final_log;
  }
  return e.session->log();
}

store::SessionStatus SessionRegistry::status_of(const Entry& e) const {
  return e.session->status();
}

}  // namespace wlab::control
