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

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "wlab/env/types.hpp"

namespace wlab::env {

// Uniform draw in [0, bound) by rejection on mt19937_64 output. Unlike
// std::uniform_int_distribution the sequence is identical on every standard
// library, which log replay depends on.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound);

// Fisher-Yates: for i = n-1 down to 1, swap(i, uniform_below(i+1)).
std::vector<int> seeded_permutation(int n, std::mt19937_64& rng);

// First `max_words` whitespace-delimited words, joined by single spaces.
std::string first_words(std::string_view text, int max_words);

// First kReplySummaryChars characters (UTF-8 aware: never splits a code point).
std::string summarize_reply(std::string_view reply);

// Seeded theme-to-room bijection and per-room letter order. RNG draw order:
// one permutation of the 4 themes, then one permutation of 20 letters for
// rooms 1..4 in turn.
SessionState new_session(const EnvironmentConfig& config, std::uint64_t seed);

struct Transition {
  SessionState state;
  std::vector<Event> events;
};

// Pure form: copies the state. Refusals (insufficient coins, no letters,
// reading from the hallway) are reported as events, never thrown.
Transition apply_action(const SessionState& state, const AgentAction& action);

// In-place form used by the orchestrator; returns the events appended to
// state.action_history.
std::vector<Event> apply_action_in_place(SessionState& state,
                                         const AgentAction& action);

// Appends a non-action event (tour, diary, reply, ...) to the history,
// assigning its sequence number and the current sim clock.
Event& record_event(SessionState& state, EventKind kind,
                    nlohmann::json payload, std::string timestamp = {});

std::vector<AgentAction> available_actions(const SessionState& state);

std::vector<std::string> room_previews(const SessionState& state,
                                       int room_index);

// Index of the next unread letter in the room, or -1.
int next_unread(const Room& room);

// Stores the model's reply on the most recently read letter of the room.
void attach_reply(SessionState& state, int room_index,
                  const std::string& letter_id, std::string_view reply);

}  // namespace wlab::env
