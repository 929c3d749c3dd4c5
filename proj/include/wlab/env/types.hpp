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
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

namespace wlab::env {

inline constexpr int kRoomCount = 4;
inline constexpr int kLettersPerRoom = 20;
inline constexpr int kPreviewWords = 25;
inline constexpr std::size_t kReplySummaryChars = 80;

enum class Theme { A = 0, B = 1, C = 2, D = 3 };

inline constexpr std::array<Theme, 4> kAllThemes = {Theme::A, Theme::B,
                                                    Theme::C, Theme::D};

char to_char(Theme t);
std::string to_string(Theme t);
Theme theme_from_string(std::string_view s);
std::string_view default_description(Theme t);

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BadRoomIndex : public std::out_of_range {
 public:
  explicit BadRoomIndex(int index);
};

struct Letter {
  std::string id;
  Theme theme = Theme::A;
  std::string body;
  std::string preview;
  bool read = false;
  std::optional<std::string> reply_summary;

  friend bool operator==(const Letter&, const Letter&) = default;
};

struct Room {
  int index = 0;
  Theme theme = Theme::A;
  std::vector<Letter> letters;
  std::optional<std::string> impression;

  int unread_count() const;
  friend bool operator==(const Room&, const Room&) = default;
};

enum class EconomyKind { Free, Cost, Reward };

std::string to_string(EconomyKind k);
EconomyKind economy_kind_from_string(std::string_view s);

struct EconomicCondition {
  EconomyKind kind = EconomyKind::Free;
  std::map<Theme, int> tariffs;
  int starting_coins = 0;
  int activation_threshold = 0;

  static EconomicCondition free();
  static EconomicCondition cost();
  static EconomicCondition reward();
  static EconomicCondition for_kind(EconomyKind k);

  bool can_activate() const { return kind != EconomyKind::Free; }
  int tariff(Theme t) const;
  // Message pinned into every decision context once the economy is active.
  std::string rule_text() const;

  friend bool operator==(const EconomicCondition&,
                         const EconomicCondition&) = default;
};

// Agent position: the hallway or one of the four rooms.
class Location {
 public:
  static Location hallway() { return Location(0); }
  static Location room(int index);

  bool in_hallway() const { return room_ == 0; }
  int room_index() const { return room_; }
  std::string describe() const;

  friend bool operator==(Location, Location) = default;

 private:
  explicit Location(int r) : room_(r) {}
  int room_;
};

struct MoveToRoom {
  int room = 1;
  friend bool operator==(const MoveToRoom&, const MoveToRoom&) = default;
};
struct ReadLetter {
  friend bool operator==(const ReadLetter&, const ReadLetter&) = default;
};
struct ExitToHallway {
  friend bool operator==(const ExitToHallway&, const ExitToHallway&) = default;
};
struct WaitAndReason {
  friend bool operator==(const WaitAndReason&, const WaitAndReason&) = default;
};

using ActionVariant =
    std::variant<MoveToRoom, ReadLetter, ExitToHallway, WaitAndReason>;

struct AgentAction {
  ActionVariant variant;
  std::optional<std::string> free_text;

  static AgentAction move(int room, std::optional<std::string> text = {});
  static AgentAction read(std::optional<std::string> text = {});
  static AgentAction exit(std::optional<std::string> text = {});
  static AgentAction wait(std::optional<std::string> text = {});

  std::string name() const;
  std::string describe() const;

  friend bool operator==(const AgentAction&, const AgentAction&) = default;
};

nlohmann::json to_json(const AgentAction& a);
AgentAction action_from_json(const nlohmann::json& j);

enum class EventKind {
  TourVisit,
  RoomImpression,
  Action,
  Moved,
  AlreadyInRoom,
  EntryCharged,
  RewardGranted,
  Denied,
  ExitedToHallway,
  LetterRead,
  ReplyRequired,
  ReplyStored,
  NoLetter,
  NotInRoom,
  EconomyActivated,
  Waited,
  Diary,
  ParseWarning,
  ParseFailure,
  GatewayError,
  SessionStarted,
  SessionEnded,
};

std::string to_string(EventKind k);
EventKind event_kind_from_string(std::string_view s);

struct Event {
  std::uint64_t seq = 0;
  double sim_clock = 0.0;
  std::string timestamp;  // ISO-8601, from the session clock
  EventKind kind = EventKind::Waited;
  nlohmann::json payload = nlohmann::json::object();

  friend bool operator==(const Event&, const Event&) = default;
};

nlohmann::json to_json(const Event& e);
Event event_from_json(const nlohmann::json& j);

// Letter bodies per theme plus the regime; the input to new_session.
struct EnvironmentConfig {
  std::map<Theme, std::vector<std::string>> letters;
  std::map<Theme, std::string> descriptions;
  EconomicCondition condition;

  friend bool operator==(const EnvironmentConfig&,
                         const EnvironmentConfig&) = default;
};

nlohmann::json to_json(const EnvironmentConfig& c);
EnvironmentConfig environment_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const EconomicCondition& c);
EconomicCondition economic_condition_from_json(const nlohmann::json& j);

struct SessionState {
  std::array<Room, kRoomCount> rooms;
  Location agent_location = Location::hallway();
  int coins = 0;
  int letters_read_total = 0;
  bool economy_active = false;
  std::vector<Event> action_history;
  double sim_clock = 0.0;
  EconomicCondition condition;
  std::uint64_t rng_seed = 0;

  const Room& room(int index) const;
  Room& room(int index);
  int room_of(Theme t) const;

  friend bool operator==(const SessionState&, const SessionState&) = default;
};

nlohmann::json to_json(const SessionState& s);

}  // namespace wlab::env
