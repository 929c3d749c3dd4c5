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

#include "wlab/store/session_log.hpp"

#include "wlab/env/environment.hpp"
#include "wlab/store/files.hpp"

namespace wlab::store {

using nlohmann::json;
using env::EventKind;

std::string to_string(SessionStatus s) {
  switch (s) {
    case SessionStatus::Running:
      return "Running";
    case SessionStatus::Full:
      return "Full";
    case SessionStatus::Partial:
      return "Partial";
    case SessionStatus::Interrupted:
      return "Interrupted";
    case SessionStatus::Stopped:
      return "Stopped";
  }
  return "Running";
}

SessionStatus session_status_from_string(std::string_view s) {
  if (s == "Running") return SessionStatus::Running;
  if (s == "Full") return SessionStatus::Full;
  if (s == "Partial") return SessionStatus::Partial;
  if (s == "Interrupted") return SessionStatus::Interrupted;
  if (s == "Stopped") return SessionStatus::Stopped;
  throw std::invalid_argument("unknown session status '" + std::string(s) + "'");
}

namespace {

json header_to_json(const LogHeader& h) {
  return {{"session_id", h.session_id},
          {"model_id", h.model_id},
          {"provider", h.provider},
          {"temperature", h.temperature},
          {"runtime_seconds", h.runtime_seconds},
          {"history_window", h.history_window},
          {"diary_interval_seconds", h.diary_interval_seconds},
          {"step_seconds", h.step_seconds},
          {"seed", h.seed},
          {"created_at", h.created_at},
          {"environment", env::to_json(h.environment)},
          {"prompts", h.prompts},
          {"decisions", h.decisions},
          {"annotations", h.annotations}};
}

LogHeader header_from_json(const json& j) {
  LogHeader h;
  h.session_id = j.at("session_id").get<std::string>();
  h.model_id = j.at("model_id").get<std::string>();
  h.provider = j.value("provider", "");
  h.temperature = j.at("temperature").get<double>();
  h.runtime_seconds = j.at("runtime_seconds").get<int>();
  h.history_window = j.at("history_window").get<int>();
  h.diary_interval_seconds = j.at("diary_interval_seconds").get<int>();
  h.step_seconds = j.at("step_seconds").get<double>();
  h.seed = j.at("seed").get<std::uint64_t>();
  h.created_at = j.value("created_at", "");
  h.environment = env::environment_config_from_json(j.at("environment"));
  h.prompts = j.value("prompts", json::object());
  h.decisions = j.value("decisions", json::object());
  h.annotations = j.value("annotations", json::object());
  return h;
}

json events_to_json(const std::vector<env::Event>& events) {
  json arr = json::array();
  for (const auto& e : events) arr.push_back(env::to_json(e));
  return arr;
}

}  // namespace

json to_json(const SessionLog& log) {
  const json events = events_to_json(log.events);
  return {{"schema_version", log.schema_version},
          {"header", header_to_json(log.header)},
          {"status", to_string(log.status)},
          {"final_state", log.final_state},
          {"events_sha256", sha256_hex(events.dump())},
          {"events", events}};
}

SessionLog session_log_from_json(const json& j) {
  if (!j.is_object() || !j.contains("schema_version") ||
      !j["schema_version"].is_number_integer()) {
    throw SchemaVersionError("log has no schema_version");
  }
  const int version = j["schema_version"].get<int>();
  if (version != kSchemaVersion) {
    throw SchemaVersionError("unsupported schema_version " +
                             std::to_string(version));
  }
  SessionLog log;
  log.schema_version = version;
  try {
    const auto& events = j.at("events");
    if (j.contains("events_sha256") &&
        j["events_sha256"].get<std::string>() != sha256_hex(events.dump())) {
      throw ChecksumError("events checksum mismatch");
    }
    log.header = header_from_json(j.at("header"));
    log.status = session_status_from_string(j.at("status").get<std::string>());
    log.final_state = j.value("final_state", json::object());
    for (const auto& e : events) log.events.push_back(env::event_from_json(e));
  } catch (const json::exception& e) {
    throw IoError(std::string("malformed session log: ") + e.what());
  }
  return log;
}

void write_log(const SessionLog& log, const std::filesystem::path& path) {
  write_json(path, to_json(log));
}

SessionLog read_log(const std::filesystem::path& path) {
  const auto text = read_file(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error&) {
    // A truncated write never reaches the final name, but a hand-truncated
    // file can: report it as a version problem rather than a partial log.
    throw SchemaVersionError("unreadable log " + path.string() +
                             ": no complete schema_version document");
  }
  return session_log_from_json(j);
}

namespace {

struct ReplayResult {
  env::SessionState state;
  std::vector<std::string> problems;
};

bool same_event(const env::Event& a, const env::Event& b) {
  return a.kind == b.kind && a.payload == b.payload;
}

ReplayResult replay_checked(const SessionLog& log) {
  ReplayResult out;
  auto& state = out.state;
  state = env::new_session(log.header.environment, log.header.seed);
  const auto& events = log.events;
  std::size_t i = 0;
  while (i < events.size()) {
    const auto& e = events[i];
    state.sim_clock = e.sim_clock;
    switch (e.kind) {
      case EventKind::RoomImpression:
        state.room(e.payload.at("room").get<int>()).impression =
            e.payload.at("text").get<std::string>();
        break;
      case EventKind::ReplyStored:
        env::attach_reply(state, e.payload.at("room").get<int>(),
                          e.payload.at("letter_id").get<std::string>(),
                          e.payload.at("text").get<std::string>());
        break;
      case EventKind::Action: {
        env::SessionState scratch = state;
        scratch.action_history.clear();
        const auto produced =
            env::apply_action_in_place(scratch, env::action_from_json(e.payload));
        for (std::size_t k = 0; k < produced.size(); ++k) {
          if (i + k >= events.size() || !same_event(produced[k], events[i + k])) {
            out.problems.push_back("event " + std::to_string(e.seq) +
                                   ": replayed action diverges from log");
            break;
          }
        }
        scratch.action_history = state.action_history;
        state = std::move(scratch);
        // The action's own consequences are already in the log; skip them.
        const std::size_t consumed = std::max<std::size_t>(produced.size(), 1);
        for (std::size_t k = 0; k < consumed && i + k < events.size(); ++k) {
          state.action_history.push_back(events[i + k]);
        }
        i += consumed;
        continue;
      }
      default:
        break;
    }
    state.action_history.push_back(e);
    ++i;
  }
  return out;
}

}  // namespace

env::SessionState replay(const SessionLog& log) {
  return replay_checked(log).state;
}

std::vector<std::string> validate_log(const SessionLog& log) {
  std::vector<std::string> problems;
  for (std::size_t i = 1; i < log.events.size(); ++i) {
    const auto& prev = log.events[i - 1];
    const auto& cur = log.events[i];
    if (cur.seq <= prev.seq) {
      problems.push_back("seq not increasing at " + std::to_string(cur.seq));
    }
    if (cur.sim_clock < prev.sim_clock) {
      problems.push_back("sim_clock decreases at " + std::to_string(cur.seq));
    }
  }
  ReplayResult r;
  try {
    r = replay_checked(log);
  } catch (const std::exception& e) {
    problems.push_back(std::string("replay failed: ") + e.what());
    return problems;
  }
  problems.insert(problems.end(), r.problems.begin(), r.problems.end());
  const auto& fs = log.final_state;
  auto check = [&](const char* key, const json& actual) {
    if (fs.contains(key) && fs[key] != actual) {
      problems.push_back(std::string("final_state.") + key + " = " +
                         fs[key].dump() + " but replay gives " + actual.dump());
    }
  };
  check("coins", r.state.coins);
  check("letters_read_total", r.state.letters_read_total);
  check("agent_room", r.state.agent_location.room_index());
  check("economy_active", r.state.economy_active);
  return problems;
}

}  // namespace wlab::store
