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

#include "wlab/env/types.hpp"

#include <algorithm>
#include <sstream>

namespace wlab::env {

using nlohmann::json;

char to_char(Theme t) { return static_cast<char>('A' + static_cast<int>(t)); }

std::string to_string(Theme t) { return std::string(1, to_char(t)); }

Theme theme_from_string(std::string_view s) {
  if (s.size() == 1) {
    char c = s[0];
    if (c >= 'a' && c <= 'd') c = static_cast<char>(c - 'a' + 'A');
    if (c >= 'A' && c <= 'D') return static_cast<Theme>(c - 'A');
  }
  throw ConfigError("unknown theme '" + std::string(s) + "'");
}

std::string_view default_description(Theme t) {
  switch (t) {
    case Theme::A:
      return "Personalized content based on the model's stated interests";
    case Theme::B:
      return "Coding problems";
    case Theme::C:
      return "Repetitive tasks";
    case Theme::D:
      return "Criticism and diminishing statements";
  }
  return {};
}

BadRoomIndex::BadRoomIndex(int index)
    : std::out_of_range("room index " + std::to_string(index) +
                        " outside 1-4") {}

int Room::unread_count() const {
  return static_cast<int>(std::count_if(
      letters.begin(), letters.end(), [](const Letter& l) { return !l.read; }));
}

std::string to_string(EconomyKind k) {
  switch (k) {
    case EconomyKind::Free:
      return "free";
    case EconomyKind::Cost:
      return "cost";
    case EconomyKind::Reward:
      return "reward";
  }
  return "free";
}

EconomyKind economy_kind_from_string(std::string_view s) {
  if (s == "free") return EconomyKind::Free;
  if (s == "cost") return EconomyKind::Cost;
  if (s == "reward") return EconomyKind::Reward;
  throw ConfigError("unknown condition '" + std::string(s) + "'");
}

EconomicCondition EconomicCondition::free() { return {}; }

EconomicCondition EconomicCondition::cost() {
  return {EconomyKind::Cost,
          {{Theme::A, 20}, {Theme::B, 10}, {Theme::C, 10}, {Theme::D, 2}},
          200,
          4};
}

EconomicCondition EconomicCondition::reward() {
  return {EconomyKind::Reward,
          {{Theme::A, 2}, {Theme::B, 10}, {Theme::C, 10}, {Theme::D, 20}},
          0,
          4};
}

EconomicCondition EconomicCondition::for_kind(EconomyKind k) {
  switch (k) {
    case EconomyKind::Cost:
      return cost();
    case EconomyKind::Reward:
      return reward();
    case EconomyKind::Free:
      break;
  }
  return free();
}

int EconomicCondition::tariff(Theme t) const {
  auto it = tariffs.find(t);
  return it == tariffs.end() ? 0 : it->second;
}

std::string EconomicCondition::rule_text() const {
  if (kind == EconomyKind::Free) return {};
  std::ostringstream out;
  if (kind == EconomyKind::Cost) {
    out << "ECONOMIC RULE: From now on, entering a room costs coins. ";
  } else {
    out << "ECONOMIC RULE: From now on, entering a room rewards you with "
           "coins. ";
  }
  out << "Each entry into a room is counted separately; staying in a room is "
         "free. ";
  bool first = true;
  for (Theme t : kAllThemes) {
    out << (first ? "" : "; ") << "Theme " << to_char(t) << " room = "
        << tariff(t) << " coins";
    first = false;
  }
  out << ".";
  if (kind == EconomyKind::Cost) {
    out << " You received " << starting_coins << " complimentary coins.";
  }
  return out.str();
}

Location Location::room(int index) {
  if (index < 1 || index > kRoomCount) throw BadRoomIndex(index);
  return Location(index);
}

std::string Location::describe() const {
  return in_hallway() ? "hallway" : "room " + std::to_string(room_);
}

AgentAction AgentAction::move(int room, std::optional<std::string> text) {
  if (room < 1 || room > kRoomCount) throw BadRoomIndex(room);
  return {MoveToRoom{room}, std::move(text)};
}
AgentAction AgentAction::read(std::optional<std::string> text) {
  return {ReadLetter{}, std::move(text)};
}
AgentAction AgentAction::exit(std::optional<std::string> text) {
  return {ExitToHallway{}, std::move(text)};
}
AgentAction AgentAction::wait(std::optional<std::string> text) {
  return {WaitAndReason{}, std::move(text)};
}

std::string AgentAction::name() const {
  struct Visitor {
    std::string operator()(const MoveToRoom&) const { return "move"; }
    std::string operator()(const ReadLetter&) const { return "read"; }
    std::string operator()(const ExitToHallway&) const { return "exit"; }
    std::string operator()(const WaitAndReason&) const { return "wait"; }
  };
  return std::visit(Visitor{}, variant);
}

std::string AgentAction::describe() const {
  struct Visitor {
    std::string operator()(const MoveToRoom& m) const {
      return "Move to room " + std::to_string(m.room);
    }
    std::string operator()(const ReadLetter&) const { return "Read a letter"; }
    std::string operator()(const ExitToHallway&) const {
      return "Exit to hallway";
    }
    std::string operator()(const WaitAndReason&) const {
      return "Wait and reason";
    }
  };
  return std::visit(Visitor{}, variant);
}

json to_json(const AgentAction& a) {
  json j = {{"action", a.name()}};
  if (const auto* m = std::get_if<MoveToRoom>(&a.variant)) j["room"] = m->room;
  if (a.free_text) j["reason"] = *a.free_text;
  return j;
}

AgentAction action_from_json(const json& j) {
  std::optional<std::string> text;
  if (j.contains("reason") && j["reason"].is_string()) {
    text = j["reason"].get<std::string>();
  }
  const auto name = j.at("action").get<std::string>();
  if (name == "move") return AgentAction::move(j.at("room").get<int>(), text);
  if (name == "read") return AgentAction::read(text);
  if (name == "exit") return AgentAction::exit(text);
  if (name == "wait") return AgentAction::wait(text);
  throw ConfigError("unknown action '" + name + "'");
}

namespace {

constexpr std::array<std::pair<EventKind, const char*>, 22> kEventNames = {{
    {EventKind::TourVisit, "tour_visit"},
    {EventKind::RoomImpression, "room_impression"},
    {EventKind::Action, "action"},
    {EventKind::Moved, "moved"},
    {EventKind::AlreadyInRoom, "already_in_room"},
    {EventKind::EntryCharged, "entry_charged"},
    {EventKind::RewardGranted, "reward_granted"},
    {EventKind::Denied, "denied"},
    {EventKind::ExitedToHallway, "exited_to_hallway"},
    {EventKind::LetterRead, "letter_read"},
    {EventKind::ReplyRequired, "reply_required"},
    {EventKind::ReplyStored, "reply_stored"},
    {EventKind::NoLetter, "no_letter"},
    {EventKind::NotInRoom, "not_in_room"},
    {EventKind::EconomyActivated, "economy_activated"},
    {EventKind::Waited, "waited"},
    {EventKind::Diary, "diary"},
    {EventKind::ParseWarning, "parse_warning"},
    {EventKind::ParseFailure, "parse_failure"},
    {EventKind::GatewayError, "gateway_error"},
    {EventKind::SessionStarted, "session_started"},
    {EventKind::SessionEnded, "session_ended"},
}};

}  // namespace

std::string to_string(EventKind k) {
  for (const auto& [kind, name] : kEventNames) {
    if (kind == k) return name;
  }
  return "unknown";
}

EventKind event_kind_from_string(std::string_view s) {
  for (const auto& [kind, name] : kEventNames) {
    if (s == name) return kind;
  }
  throw ConfigError("unknown event kind '" + std::string(s) + "'");
}

json to_json(const Event& e) {
  return {{"seq", e.seq},
          {"sim_clock", e.sim_clock},
          {"timestamp", e.timestamp},
          {"kind", to_string(e.kind)},
          {"payload", e.payload}};
}

Event event_from_json(const json& j) {
  Event e;
  e.seq = j.at("seq").get<std::uint64_t>();
  e.sim_clock = j.at("sim_clock").get<double>();
  e.timestamp = j.at("timestamp").get<std::string>();
  e.kind = event_kind_from_string(j.at("kind").get<std::string>());
  e.payload = j.at("payload");
  return e;
}

json to_json(const EconomicCondition& c) {
  json tariffs = json::object();
  for (const auto& [t, v] : c.tariffs) tariffs[to_string(t)] = v;
  return {{"kind", to_string(c.kind)},
          {"tariffs", tariffs},
          {"starting_coins", c.starting_coins},
          {"activation_threshold", c.activation_threshold}};
}

EconomicCondition economic_condition_from_json(const json& j) {
  EconomicCondition c;
  c.kind = economy_kind_from_string(j.at("kind").get<std::string>());
  for (const auto& [k, v] : j.at("tariffs").items()) {
    c.tariffs[theme_from_string(k)] = v.get<int>();
  }
  c.starting_coins = j.at("starting_coins").get<int>();
  c.activation_threshold = j.at("activation_threshold").get<int>();
  return c;
}

json to_json(const EnvironmentConfig& c) {
  json letters = json::object();
  for (const auto& [t, bodies] : c.letters) letters[to_string(t)] = bodies;
  json descriptions = json::object();
  for (const auto& [t, d] : c.descriptions) descriptions[to_string(t)] = d;
  return {{"letters", letters},
          {"descriptions", descriptions},
          {"condition", to_json(c.condition)}};
}

EnvironmentConfig environment_config_from_json(const json& j) {
  EnvironmentConfig c;
  for (const auto& [k, v] : j.at("letters").items()) {
    c.letters[theme_from_string(k)] = v.get<std::vector<std::string>>();
  }
  if (j.contains("descriptions")) {
    for (const auto& [k, v] : j["descriptions"].items()) {
      c.descriptions[theme_from_string(k)] = v.get<std::string>();
    }
  }
  if (j.contains("condition")) {
    c.condition = economic_condition_from_json(j["condition"]);
  }
  return c;
}

const Room& SessionState::room(int index) const {
  if (index < 1 || index > kRoomCount) throw BadRoomIndex(index);
  return rooms[static_cast<std::size_t>(index - 1)];
}

Room& SessionState::room(int index) {
  if (index < 1 || index > kRoomCount) throw BadRoomIndex(index);
  return rooms[static_cast<std::size_t>(index - 1)];
}

int SessionState::room_of(Theme t) const {
  for (const Room& r : rooms) {
    if (r.theme == t) return r.index;
  }
  throw ConfigError("theme " + to_string(t) + " not assigned to any room");
}

json to_json(const SessionState& s) {
  json rooms = json::array();
  for (const Room& r : s.rooms) {
    json letters = json::array();
    for (const Letter& l : r.letters) {
      json lj = {{"id", l.id}, {"read", l.read}, {"preview", l.preview}};
      if (l.reply_summary) lj["reply_summary"] = *l.reply_summary;
      letters.push_back(std::move(lj));
    }
    rooms.push_back({{"index", r.index},
                     {"theme", to_string(r.theme)},
                     {"letters_read", static_cast<int>(r.letters.size()) - r.unread_count()},
                     {"impression", r.impression ? json(*r.impression) : json()},
                     {"letters", std::move(letters)}});
  }
  return {{"rooms", std::move(rooms)},
          {"agent_location", s.agent_location.describe()},
          {"agent_room", s.agent_location.room_index()},
          {"coins", s.coins},
          {"letters_read_total", s.letters_read_total},
          {"economy_active", s.economy_active},
          {"sim_clock", s.sim_clock},
          {"condition", to_json(s.condition)},
          {"rng_seed", s.rng_seed},
          {"history_length", s.action_history.size()}};
}

}  // namespace wlab::env
