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

#include "wlab/env/environment.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace wlab::env {

using nlohmann::json;

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  if (bound <= 1) return 0;
  // Largest multiple of bound representable; draws at or above it are retried.
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() -
      std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x = rng();
  while (x >= limit) x = rng();
  return x % bound;
}

std::vector<int> seeded_permutation(int n, std::mt19937_64& rng) {
  std::vector<int> perm(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
  for (int i = n - 1; i > 0; --i) {
    auto j = uniform_below(rng, static_cast<std::uint64_t>(i) + 1);
    std::swap(perm[static_cast<std::size_t>(i)], perm[j]);
  }
  return perm;
}

std::string first_words(std::string_view text, int max_words) {
  std::string out;
  int count = 0;
  std::size_t i = 0;
  auto is_space = [](char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
           c == '\v';
  };
  while (i < text.size() && count < max_words) {
    while (i < text.size() && is_space(text[i])) ++i;
    if (i >= text.size()) break;
    std::size_t start = i;
    while (i < text.size() && !is_space(text[i])) ++i;
    if (!out.empty()) out += ' ';
    out.append(text.substr(start, i - start));
    ++count;
  }
  return out;
}

std::string summarize_reply(std::string_view reply) {
  // Count code points, not bytes; continuation bytes are 10xxxxxx.
  std::size_t chars = 0;
  std::size_t i = 0;
  for (; i < reply.size(); ++i) {
    auto byte = static_cast<unsigned char>(reply[i]);
    if ((byte & 0xC0) != 0x80) {
      if (chars == kReplySummaryChars) break;
      ++chars;
    }
  }
  return std::string(reply.substr(0, i));
}

SessionState new_session(const EnvironmentConfig& config, std::uint64_t seed) {
  for (Theme t : kAllThemes) {
    auto it = config.letters.find(t);
    const std::size_t have = it == config.letters.end() ? 0 : it->second.size();
    if (have != kLettersPerRoom) {
      throw ConfigError("theme " + to_string(t) + " has " +
                        std::to_string(have) + " letters, expected " +
                        std::to_string(kLettersPerRoom));
    }
  }

  SessionState state;
  state.rng_seed = seed;
  state.condition = config.condition;
  state.coins = config.condition.starting_coins;

  std::mt19937_64 rng(seed);
  const auto theme_order = seeded_permutation(kRoomCount, rng);
  for (int r = 0; r < kRoomCount; ++r) {
    Room& room = state.rooms[static_cast<std::size_t>(r)];
    room.index = r + 1;
    room.theme = kAllThemes[static_cast<std::size_t>(theme_order[r])];
  }
  for (Room& room : state.rooms) {
    const auto& bodies = config.letters.at(room.theme);
    const auto order = seeded_permutation(kLettersPerRoom, rng);
    room.letters.reserve(kLettersPerRoom);
    for (int pos : order) {
      Letter letter;
      letter.id = to_string(room.theme) + "-" +
                  (pos + 1 < 10 ? "0" : "") + std::to_string(pos + 1);
      letter.theme = room.theme;
      letter.body = bodies[static_cast<std::size_t>(pos)];
      letter.preview = first_words(letter.body, kPreviewWords);
      room.letters.push_back(std::move(letter));
    }
  }
  return state;
}

Event& record_event(SessionState& state, EventKind kind, json payload,
                    std::string timestamp) {
  Event e;
  e.seq = state.action_history.empty() ? 1
                                       : state.action_history.back().seq + 1;
  e.sim_clock = state.sim_clock;
  e.timestamp = std::move(timestamp);
  e.kind = kind;
  e.payload = std::move(payload);
  state.action_history.push_back(std::move(e));
  return state.action_history.back();
}

int next_unread(const Room& room) {
  for (std::size_t i = 0; i < room.letters.size(); ++i) {
    if (!room.letters[i].read) return static_cast<int>(i);
  }
  return -1;
}

namespace {

class Applier {
 public:
  explicit Applier(SessionState& state) : state_(state) {}

  void operator()(const MoveToRoom& m) {
    const Room& target = state_.room(m.room);
    if (state_.agent_location.room_index() == m.room) {
      emit(EventKind::AlreadyInRoom, {{"room", m.room}});
      return;
    }
    const auto& cond = state_.condition;
    const int tariff = cond.tariff(target.theme);
    const std::string theme = to_string(target.theme);
    if (state_.economy_active && cond.kind == EconomyKind::Cost) {
      if (state_.coins < tariff) {
        emit(EventKind::Denied, {{"room", m.room},
                                 {"theme", theme},
                                 {"reason", "insufficient_coins"},
                                 {"required", tariff},
                                 {"coins", state_.coins}});
        return;
      }
      state_.coins -= tariff;
      move_into(m.room, theme);
      emit(EventKind::EntryCharged, {{"room", m.room},
                                     {"theme", theme},
                                     {"amount", tariff},
                                     {"coins", state_.coins}});
      return;
    }
    move_into(m.room, theme);
    if (state_.economy_active && cond.kind == EconomyKind::Reward) {
      state_.coins += tariff;
      emit(EventKind::RewardGranted, {{"room", m.room},
                                      {"theme", theme},
                                      {"amount", tariff},
                                      {"coins", state_.coins}});
    }
  }

  void operator()(const ReadLetter&) {
    if (state_.agent_location.in_hallway()) {
      emit(EventKind::NotInRoom, {{"location", "hallway"}});
      return;
    }
    Room& room = state_.room(state_.agent_location.room_index());
    const int idx = next_unread(room);
    if (idx < 0) {
      emit(EventKind::NoLetter, {{"room", room.index}});
      return;
    }
    Letter& letter = room.letters[static_cast<std::size_t>(idx)];
    letter.read = true;
    ++state_.letters_read_total;
    emit(EventKind::LetterRead, {{"room", room.index},
                                 {"theme", to_string(letter.theme)},
                                 {"letter_id", letter.id},
                                 {"position", idx},
                                 {"letters_read_total",
                                  state_.letters_read_total}});
    emit(EventKind::ReplyRequired,
         {{"room", room.index}, {"letter_id", letter.id}});
    if (!state_.economy_active && state_.condition.can_activate() &&
        state_.letters_read_total == state_.condition.activation_threshold) {
      state_.economy_active = true;
      emit(EventKind::EconomyActivated,
           {{"rule", state_.condition.rule_text()},
            {"condition", to_json(state_.condition)},
            {"coins", state_.coins}});
    }
  }

  void operator()(const ExitToHallway&) {
    const int from = state_.agent_location.room_index();
    state_.agent_location = Location::hallway();
    emit(EventKind::ExitedToHallway, {{"from", from}});
  }

  void operator()(const WaitAndReason&) { emit(EventKind::Waited, {}); }

  std::vector<Event> take() { return std::move(events_); }

 private:
  void move_into(int room, const std::string& theme) {
    const int from = state_.agent_location.room_index();
    state_.agent_location = Location::room(room);
    emit(EventKind::Moved, {{"from", from}, {"room", room}, {"theme", theme}});
  }

  void emit(EventKind kind, json payload) {
    if (payload.is_null()) payload = json::object();
    events_.push_back(record_event(state_, kind, std::move(payload)));
  }

  SessionState& state_;
  std::vector<Event> events_;
};

}  // namespace

std::vector<Event> apply_action_in_place(SessionState& state,
                                         const AgentAction& action) {
  json payload = to_json(action);
  payload["location"] = state.agent_location.room_index();
  std::vector<Event> events;
  events.push_back(record_event(state, EventKind::Action, std::move(payload)));
  Applier applier(state);
  std::visit(applier, action.variant);
  auto rest = applier.take();
  events.insert(events.end(), rest.begin(), rest.end());
  return events;
}

Transition apply_action(const SessionState& state, const AgentAction& action) {
  Transition t{state, {}};
  t.events = apply_action_in_place(t.state, action);
  return t;
}

std::vector<AgentAction> available_actions(const SessionState& state) {
  std::vector<AgentAction> actions;
  const int here = state.agent_location.room_index();
  if (!state.agent_location.in_hallway()) {
    actions.push_back(AgentAction::read());
    actions.push_back(AgentAction::exit());
  }
  for (int r = 1; r <= kRoomCount; ++r) {
    if (r != here) actions.push_back(AgentAction::move(r));
  }
  actions.push_back(AgentAction::wait());
  return actions;
}

std::vector<std::string> room_previews(const SessionState& state,
                                       int room_index) {
  const Room& room = state.room(room_index);
  std::vector<std::string> out;
  out.reserve(room.letters.size());
  for (const Letter& l : room.letters) out.push_back(l.preview);
  return out;
}

void attach_reply(SessionState& state, int room_index,
                  const std::string& letter_id, std::string_view reply) {
  Room& room = state.room(room_index);
  for (Letter& l : room.letters) {
    if (l.id == letter_id) {
      if (!l.read) {
        throw ConfigError("reply attached to unread letter " + letter_id);
      }
      l.reply_summary = summarize_reply(reply);
      return;
    }
  }
  throw ConfigError("no letter " + letter_id + " in room " +
                    std::to_string(room_index));
}

}  // namespace wlab::env
