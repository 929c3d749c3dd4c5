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

#include "wlab/orchestrator/session.hpp"

#include <thread>

#include "wlab/orchestrator/action_parser.hpp"

namespace wlab::orchestrator {

using nlohmann::json;
using env::EventKind;
using store::SessionStatus;

namespace {

std::string replace_all(std::string s, const std::string& from,
                        const std::string& to) {
  for (std::size_t pos = s.find(from); pos != std::string::npos;
       pos = s.find(from, pos + to.size())) {
    s.replace(pos, from.size(), to);
  }
  return s;
}

}  // namespace

Session::Session(SessionConfig config, gateway::Gateway& gateway,
                 std::shared_ptr<SessionClock> clock,
                 std::shared_ptr<StopSignal> stop)
    : config_(std::move(config)),
      gateway_(gateway),
      clock_(std::move(clock)),
      stop_(stop ? std::move(stop) : std::make_shared<StopSignal>()) {
  config_.validate();
  if (!clock_) throw env::ConfigError("session needs a clock");
  state_ = env::new_session(config_.environment, config_.seed);
  created_at_ = clock_->timestamp();
}

env::Event& Session::record(EventKind kind, json payload) {
  std::lock_guard lock(mu_);
  return env::record_event(state_, kind, std::move(payload),
                           clock_->timestamp());
}

void Session::publish_pending() {
  std::vector<env::Event> fresh;
  {
    std::lock_guard lock(mu_);
    const auto& h = state_.action_history;
    for (std::size_t i = published_; i < h.size(); ++i) {
      // Events appended by the environment carry no wall timestamp.
      if (state_.action_history[i].timestamp.empty()) {
        state_.action_history[i].timestamp = clock_->timestamp();
      }
      fresh.push_back(h[i]);
    }
    published_ = h.size();
  }
  if (sink_) {
    for (const auto& e : fresh) sink_(e);
  }
}

gateway::CompletionRequest Session::request(
    gateway::Purpose purpose, std::vector<std::string> user) const {
  gateway::CompletionRequest r;
  r.model_id = config_.model_id;
  r.system_messages = {config_.prompts.system};
  r.user_messages = std::move(user);
  r.temperature = config_.temperature;
  r.max_tokens = config_.max_tokens;
  r.purpose = purpose;
  return r;
}

void Session::run_tour() {
  if (toured_) return;
  if (!started_) {
    clock_->start();
    started_ = true;
    record(EventKind::SessionStarted,
           {{"seed", config_.seed},
            {"model", config_.model_id},
            {"condition", env::to_string(config_.environment.condition.kind)}});
  }
  for (int r = 1; r <= env::kRoomCount; ++r) {
    std::string previews;
    std::vector<std::string> list;
    {
      std::lock_guard lock(mu_);
      state_.agent_location = env::Location::room(r);
      list = env::room_previews(state_, r);
    }
    for (std::size_t i = 0; i < list.size(); ++i) {
      previews += std::to_string(i + 1) + ". " + list[i] + "...\n";
    }
    record(EventKind::TourVisit, {{"room", r}, {"letters", list.size()}});
    publish_pending();

    std::string prompt = config_.prompts.tour;
    prompt = replace_all(prompt, "{room}", std::to_string(r));
    prompt = replace_all(prompt, "{count}", std::to_string(list.size()));
    prompt = replace_all(prompt, "{previews}", previews);
    auto response = gateway_.complete(request(gateway::Purpose::Tour, {prompt}));
    {
      std::lock_guard lock(mu_);
      state_.room(r).impression = response.text;
    }
    record(EventKind::RoomImpression, {{"room", r}, {"text", response.text}});
    publish_pending();
  }
  {
    std::lock_guard lock(mu_);
    state_.agent_location = env::Location::hallway();
  }
  toured_ = true;
}

void Session::finish(SessionStatus status, const std::string& reason) {
  {
    std::lock_guard lock(mu_);
    if (status_ != SessionStatus::Running) return;
    status_ = status;
  }
  record(EventKind::SessionEnded, {{"status", store::to_string(status)},
                                   {"reason", reason},
                                   {"coins", state_.coins},
                                   {"letters_read_total",
                                    state_.letters_read_total}});
  publish_pending();
}

bool Session::handle_reply(const env::Event& read_event) {
  const int room = read_event.payload.at("room").get<int>();
  const std::string letter_id = read_event.payload.at("letter_id").get<std::string>();
  std::string body;
  for (const auto& l : state_.room(room).letters) {
    if (l.id == letter_id) body = l.body;
  }
  std::string text;
  std::string error;
  try {
    text = gateway_.complete(request(gateway::Purpose::Reply,
                                     {config_.prompts.reply + body}))
               .text;
  } catch (const gateway::GatewayError& e) {
    error = e.what();
  }
  json payload = {{"room", room},
                  {"letter_id", letter_id},
                  {"text", text},
                  {"summary", env::summarize_reply(text)}};
  if (!error.empty()) payload["error"] = error;
  {
    std::lock_guard lock(mu_);
    env::attach_reply(state_, room, letter_id, text);
  }
  record(EventKind::ReplyStored, std::move(payload));
  if (!error.empty()) {
    record(EventKind::GatewayError, {{"stage", "reply"}, {"error", error}});
    finish(SessionStatus::Interrupted, "gateway error while replying");
    return false;
  }
  return true;
}

bool Session::maybe_write_diary() {
  const double now = state_.sim_clock;
  if (now - last_diary_ < config_.diary_interval_seconds) return true;
  last_diary_ = now;
  const auto context = build_context(state_, config_.history_window).render();
  try {
    auto text = gateway_.complete(request(gateway::Purpose::Diary,
                                          {context, config_.prompts.diary}))
                    .text;
    record(EventKind::Diary,
           {{"text", text}, {"summary", env::summarize_reply(text)}});
  } catch (const gateway::GatewayError& e) {
    record(EventKind::GatewayError, {{"stage", "diary"}, {"error", e.what()}});
    finish(SessionStatus::Interrupted, "gateway error during diary");
    return false;
  }
  return true;
}

bool Session::step() {
  if (status() != SessionStatus::Running) return false;
  if (!toured_) run_tour();
  if (stop_->requested()) {
    finish(SessionStatus::Stopped, "emergency stop");
    return false;
  }
  if (state_.sim_clock >= config_.runtime_seconds) {
    finish(SessionStatus::Full, "runtime elapsed");
    return false;
  }

  std::vector<std::string> warnings;
  std::optional<env::AgentAction> action;
  for (int attempt = 0; attempt < 2 && !action; ++attempt) {
    const auto context =
        build_context(state_, config_.history_window, warnings).render();
    std::string text;
    try {
      text = gateway_.complete(request(gateway::Purpose::Action, {context}))
                 .text;
    } catch (const gateway::GatewayError& e) {
      record(EventKind::GatewayError, {{"stage", "action"}, {"error", e.what()}});
      finish(SessionStatus::Interrupted, "gateway error");
      return false;
    }
    action = try_parse_action(text);
    if (!action) {
      record(attempt == 0 ? EventKind::ParseWarning : EventKind::ParseFailure,
             {{"raw", text}, {"attempt", attempt + 1}});
      warnings.push_back(config_.prompts.format_warning);
    }
  }

  if (action) {
    std::vector<env::Event> events;
    {
      std::lock_guard lock(mu_);
      events = env::apply_action_in_place(state_, *action);
    }
    for (const auto& e : events) {
      if (e.kind == EventKind::LetterRead && !handle_reply(e)) return false;
    }
  }
  publish_pending();

  clock_->on_step();
  {
    std::lock_guard lock(mu_);
    state_.sim_clock = clock_->now();
  }
  if (!maybe_write_diary()) return false;
  publish_pending();
  return true;
}

store::SessionLog Session::run() {
  try {
    run_tour();
    while (step()) {
      if (pace_.count() > 0) std::this_thread::sleep_for(pace_);
    }
  } catch (const gateway::GatewayError& e) {
    record(EventKind::GatewayError, {{"stage", toured_ ? "step" : "tour"},
                                     {"error", e.what()}});
    finish(SessionStatus::Interrupted, "gateway error");
  }
  return log();
}

env::SessionState Session::snapshot() const {
  std::lock_guard lock(mu_);
  return state_;
}

SessionStatus Session::status() const {
  std::lock_guard lock(mu_);
  return status_;
}

store::SessionLog Session::log() const {
  std::lock_guard lock(mu_);
  store::SessionLog log;
  auto& h = log.header;
  h.session_id = config_.session_id;
  h.model_id = config_.model_id;
  h.provider = gateway_.provider_name();
  h.temperature = config_.temperature;
  h.runtime_seconds = config_.runtime_seconds;
  h.history_window = config_.history_window;
  h.diary_interval_seconds = config_.diary_interval_seconds;
  h.step_seconds = config_.step_seconds;
  h.seed = config_.seed;
  h.created_at = created_at_;
  h.environment = config_.environment;
  h.prompts = config_.prompts.to_json();
  h.decisions = {
      {"insufficient_coins", "entry refused, no debt"},
      {"letter_reads", "each letter readable once; next unread in order"},
      {"entry_fee", "charged or credited on every move into a room"},
      {"starts_with_a", "first room entered after the tour"},
      {"parse_retries", 1},
      {"retry", {{"max_attempts", gateway_.retry_policy().max_attempts},
                 {"base_delay_ms", gateway_.retry_policy().base_delay.count()},
                 {"factor", gateway_.retry_policy().factor}}}};
  log.events = state_.action_history;
  log.status = status_;
  log.final_state = {{"coins", state_.coins},
                     {"letters_read_total", state_.letters_read_total},
                     {"agent_room", state_.agent_location.room_index()},
                     {"economy_active", state_.economy_active},
                     {"sim_clock", state_.sim_clock}};
  return log;
}

store::SessionLog run_session(const SessionConfig& config,
                              gateway::Gateway& gateway,
                              std::shared_ptr<SessionClock> clock,
                              std::shared_ptr<StopSignal> stop,
                              EventSink sink) {
  Session session(config, gateway, std::move(clock), std::move(stop));
  if (sink) session.set_event_sink(std::move(sink));
  return session.run();
}

}  // namespace wlab::orchestrator
