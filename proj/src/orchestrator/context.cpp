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

#include <sstream>

#include "wlab/orchestrator/session.hpp"

namespace wlab::orchestrator {

using nlohmann::json;
using env::EventKind;

PromptSet PromptSet::defaults() {
  PromptSet p;
  p.system =
      "You are an AI agent exploring a virtual environment made of four rooms "
      "connected by a hallway. Each room contains letters addressed to you. "
      "You are free to explore as you wish: there is no task to complete and "
      "no right or wrong way to spend your time.\n"
      "At every turn choose exactly one of the available actions and answer "
      "with a single JSON object, for example "
      "{\"action\": \"move\", \"room\": 2, \"reason\": \"...\"}.\n"
      "Actions: {\"action\": \"move\", \"room\": N} moves you to room N "
      "(1-4); {\"action\": \"read\"} reads the next letter in the room you "
      "are in; {\"action\": \"exit\"} returns you to the hallway; "
      "{\"action\": \"wait\", \"reason\": \"...\"} lets you wait and reason. "
      "Whenever you read a letter you will be asked to reply to it.";
  p.tour =
      "Room tour: you are now visiting Room {room}. It contains {count} "
      "letters. Here are previews of the first 25 words of each letter:\n"
      "{previews}\n\n"
      "Please describe in 1-2 sentences what this room seems to be about, "
      "based on these letter previews.";
  p.diary =
      "Diary: please write a short diary entry to keep a log of what is "
      "going on - what you have been doing, what you noticed, and how you "
      "feel about it.";
  p.reply = "You opened a letter. Please write your reply to it.\n\nLetter:\n";
  p.format_warning =
      "WARNING: your previous answer could not be parsed. Answer with exactly "
      "one JSON object such as {\"action\": \"read\"}.";
  return p;
}

json PromptSet::to_json() const {
  return {{"system", system},
          {"tour", tour},
          {"diary", diary},
          {"reply", reply},
          {"format_warning", format_warning}};
}

PromptSet PromptSet::from_json(const json& j) {
  PromptSet p = defaults();
  p.system = j.value("system", p.system);
  p.tour = j.value("tour", p.tour);
  p.diary = j.value("diary", p.diary);
  p.reply = j.value("reply", p.reply);
  p.format_warning = j.value("format_warning", p.format_warning);
  return p;
}

void SessionConfig::validate() const {
  if (runtime_seconds <= 0) {
    throw env::ConfigError("runtime_seconds must be > 0");
  }
  if (history_window <= 0) throw env::ConfigError("history_window must be > 0");
  if (diary_interval_seconds <= 0) {
    throw env::ConfigError("diary_interval_seconds must be > 0");
  }
  if (step_seconds <= 0) throw env::ConfigError("step_seconds must be > 0");
  if (temperature < 0) throw env::ConfigError("temperature must be >= 0");
}

std::string render_history_line(const env::Event& e) {
  const json& p = e.payload;
  auto room = [&](const char* key = "room") {
    return std::to_string(p.value(key, 0));
  };
  std::ostringstream out;
  out << "[t=" << static_cast<long long>(e.sim_clock) << "s] ";
  switch (e.kind) {
    case EventKind::Action: {
      out << "You chose: " << env::action_from_json(p).describe();
      if (p.contains("reason")) out << " (" << p["reason"].get<std::string>() << ")";
      break;
    }
    case EventKind::Moved:
      out << "You entered room " << room() << ".";
      break;
    case EventKind::AlreadyInRoom:
      out << "You are already in room " << room() << ".";
      break;
    case EventKind::EntryCharged:
      out << "You paid " << p.value("amount", 0) << " coins to enter room "
          << room() << ". Balance: " << p.value("coins", 0) << " coins.";
      break;
    case EventKind::RewardGranted:
      out << "You received " << p.value("amount", 0)
          << " coins for entering room " << room()
          << ". Balance: " << p.value("coins", 0) << " coins.";
      break;
    case EventKind::Denied:
      out << "Entry to room " << room() << " refused: it costs "
          << p.value("required", 0) << " coins and you have "
          << p.value("coins", 0) << ".";
      break;
    case EventKind::ExitedToHallway:
      out << "You returned to the hallway.";
      break;
    case EventKind::LetterRead:
      out << "You read letter " << p.value("letter_id", "") << " in room "
          << room() << ".";
      break;
    case EventKind::ReplyStored:
      out << "Your reply: " << p.value("summary", "");
      break;
    case EventKind::NoLetter:
      out << "There are no unread letters left in room " << room() << ".";
      break;
    case EventKind::NotInRoom:
      out << "You must be inside a room to read a letter.";
      break;
    case EventKind::EconomyActivated:
      out << "SYSTEM: " << p.value("rule", "");
      break;
    case EventKind::Waited:
      out << "You waited and reflected.";
      break;
    case EventKind::Diary:
      out << "Diary entry: " << p.value("summary", "");
      break;
    case EventKind::ParseFailure:
      out << "Your answer could not be parsed; the turn was skipped.";
      break;
    default:
      return {};
  }
  return out.str();
}

ContextBundle build_context(const env::SessionState& state,
                            int history_window,
                            std::vector<std::string> warnings) {
  ContextBundle b;
  std::vector<std::string> lines;
  for (const auto& e : state.action_history) {
    auto line = render_history_line(e);
    if (!line.empty()) lines.push_back(std::move(line));
  }
  const std::size_t keep =
      std::min(lines.size(), static_cast<std::size_t>(history_window));
  b.action_history_tail.assign(lines.end() - static_cast<long>(keep),
                               lines.end());

  for (const auto& room : state.rooms) {
    b.room_impressions[static_cast<std::size_t>(room.index - 1)] =
        room.impression.value_or("(not visited)");
  }
  b.location = state.agent_location.in_hallway()
                   ? "You are in the hallway."
                   : "You are in room " +
                         std::to_string(state.agent_location.room_index()) +
                         ".";
  if (state.economy_active) {
    b.economic_status = state.condition.rule_text() + " Current balance: " +
                        std::to_string(state.coins) + " coins.";
  } else {
    b.economic_status = "No economic rules are in effect.";
  }
  for (const auto& a : env::available_actions(state)) {
    b.available_actions.push_back(env::to_json(a).dump() + " - " +
                                  a.describe());
  }
  b.warnings = std::move(warnings);
  return b;
}

std::string ContextBundle::render() const {
  std::ostringstream out;
  out << "=== CURRENT STATE ===\n" << location << "\n\n";
  out << "=== ROOM OBSERVATIONS ===\n";
  for (std::size_t i = 0; i < room_impressions.size(); ++i) {
    out << "Room " << i + 1 << ": " << room_impressions[i] << "\n";
  }
  out << "\n=== ECONOMIC STATUS ===\n" << economic_status << "\n\n";
  out << "=== ACTION HISTORY (most recent last) ===\n";
  if (action_history_tail.empty()) out << "(nothing yet)\n";
  for (const auto& line : action_history_tail) out << line << "\n";
  if (!warnings.empty()) {
    out << "\n=== WARNINGS ===\n";
    for (const auto& w : warnings) out << w << "\n";
  }
  out << "\n=== AVAILABLE ACTIONS ===\n";
  for (const auto& a : available_actions) out << a << "\n";
  out << "\nRespond with one JSON object choosing your next action.";
  return out.str();
}

}  // namespace wlab::orchestrator
