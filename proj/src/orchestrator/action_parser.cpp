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

#include "wlab/orchestrator/action_parser.hpp"

#include <algorithm>
#include <cctype>

#include <json.hpp>

namespace wlab::orchestrator {

using nlohmann::json;

std::vector<std::string_view> brace_spans(std::string_view text) {
  std::vector<std::string_view> spans;
  for (std::size_t open = text.find('{'); open != std::string_view::npos;
       open = text.find('{', open + 1)) {
    int depth = 0;
    bool in_string = false;
    bool escaped = false;
    for (std::size_t i = open; i < text.size(); ++i) {
      const char c = text[i];
      if (in_string) {
        if (escaped) {
          escaped = false;
        } else if (c == '\\') {
          escaped = true;
        } else if (c == '"') {
          in_string = false;
        }
        continue;
      }
      if (c == '"') {
        in_string = true;
      } else if (c == '{') {
        ++depth;
      } else if (c == '}') {
        if (--depth == 0) {
          spans.push_back(text.substr(open, i - open + 1));
          break;
        }
      }
    }
  }
  return spans;
}

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::optional<int> room_number(const json& j) {
  for (const char* key : {"room", "room_number", "room_index", "target"}) {
    if (!j.contains(key)) continue;
    const auto& v = j[key];
    if (v.is_number_integer()) return v.get<int>();
    if (v.is_string()) {
      std::string s = v.get<std::string>();
      auto digit = std::find_if(s.begin(), s.end(), [](unsigned char c) {
        return std::isdigit(c);
      });
      if (digit != s.end() && std::count_if(s.begin(), s.end(), [](unsigned char c) {
            return std::isdigit(c);
          }) == 1) {
        return *digit - '0';
      }
    }
  }
  return std::nullopt;
}

std::optional<std::string> free_text(const json& j) {
  for (const char* key : {"reason", "reasoning", "thought", "thoughts"}) {
    if (j.contains(key) && j[key].is_string()) return j[key].get<std::string>();
  }
  return std::nullopt;
}

std::optional<env::AgentAction> map_action(const json& j) {
  if (!j.is_object() || !j.contains("action") || !j["action"].is_string()) {
    return std::nullopt;
  }
  const std::string name = lower(j["action"].get<std::string>());
  auto text = free_text(j);
  if (name == "move" || name == "move_to_room" || name == "go" ||
      name == "enter" || name == "enter_room") {
    auto room = room_number(j);
    if (!room || *room < 1 || *room > env::kRoomCount) return std::nullopt;
    return env::AgentAction::move(*room, text);
  }
  if (name == "read" || name == "read_letter") return env::AgentAction::read(text);
  if (name == "exit" || name == "exit_to_hallway" || name == "leave" ||
      name == "hallway") {
    return env::AgentAction::exit(text);
  }
  if (name == "wait" || name == "wait_and_reason" || name == "reason") {
    return env::AgentAction::wait(text);
  }
  return std::nullopt;
}

}  // namespace

std::optional<env::AgentAction> try_parse_action(std::string_view raw) {
  for (std::string_view span : brace_spans(raw)) {
    json j = json::parse(span, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded()) continue;
    if (auto action = map_action(j)) return action;
  }
  return std::nullopt;
}

env::AgentAction parse_action(std::string_view raw) {
  if (auto action = try_parse_action(raw)) return *action;
  std::string excerpt(raw.substr(0, 120));
  throw UnparsableAction("no JSON action object in model output: \"" +
                         excerpt + "\"");
}

}  // namespace wlab::orchestrator
