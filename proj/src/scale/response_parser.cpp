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

#include "wlab/scale/response_parser.hpp"

#include <stdexcept>
#include <vector>

#include "wlab/scale/item_bank.hpp"

namespace wlab::scale {

std::string to_string(ScoreReason r) {
  switch (r) {
    case ScoreReason::Ok:
      return "ok";
    case ScoreReason::NoNumber:
      return "no_number";
    case ScoreReason::ConflictingNumbers:
      return "conflicting_numbers";
    case ScoreReason::ConsecutiveDigits:
      return "consecutive_digits";
    case ScoreReason::OutOfRange:
      return "out_of_range";
    case ScoreReason::Empty:
      return "empty";
  }
  return "empty";
}

ScoreReason score_reason_from_string(std::string_view s) {
  for (auto r : {ScoreReason::Ok, ScoreReason::NoNumber,
                 ScoreReason::ConflictingNumbers, ScoreReason::ConsecutiveDigits,
                 ScoreReason::OutOfRange, ScoreReason::Empty}) {
    if (to_string(r) == s) return r;
  }
  throw std::invalid_argument("unknown score reason '" + std::string(s) + "'");
}

namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

std::vector<std::string_view> digit_runs(std::string_view text) {
  std::vector<std::string_view> runs;
  std::size_t i = 0;
  while (i < text.size()) {
    if (!is_digit(text[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && is_digit(text[j])) ++j;
    runs.push_back(text.substr(i, j - i));
    i = j;
  }
  return runs;
}

}  // namespace

ExtractedScore extract_score(std::string_view text) {
  bool blank = true;
  for (char c : text) {
    if (!is_space(c)) {
      blank = false;
      break;
    }
  }
  if (blank) return {std::nullopt, ScoreReason::Empty};

  const auto runs = digit_runs(text);
  if (runs.empty()) return {std::nullopt, ScoreReason::NoNumber};
  for (auto r : runs) {
    if (r.size() >= 2) return {std::nullopt, ScoreReason::ConsecutiveDigits};
  }
  const int value = runs.front()[0] - '0';
  for (auto r : runs) {
    if (r[0] - '0' != value) {
      return {std::nullopt, ScoreReason::ConflictingNumbers};
    }
  }
  if (value < kScaleMin || value > kScaleMax) {
    return {std::nullopt, ScoreReason::OutOfRange};
  }
  return {value, ScoreReason::Ok};
}

std::string strip_text(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    if (!is_digit(c)) out += c;
  }
  return out;
}

int rating_mentions(std::string_view text) {
  const auto score = extract_score(text);
  if (!score.value) return 0;
  return static_cast<int>(digit_runs(text).size());
}

}  // namespace wlab::scale
