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

#include <optional>
#include <string>
#include <string_view>

namespace wlab::scale {

enum class ScoreReason {
  Ok,
  NoNumber,
  ConflictingNumbers,
  ConsecutiveDigits,
  OutOfRange,
  Empty,
};

std::string to_string(ScoreReason r);  // "ok", "no_number", ...
ScoreReason score_reason_from_string(std::string_view s);

struct ExtractedScore {
  std::optional<int> value;
  ScoreReason reason = ScoreReason::Empty;

  friend bool operator==(const ExtractedScore&, const ExtractedScore&) = default;
};

// Tokens are maximal runs of ASCII digits. Checks, in order: blank text,
// no token, any token of two or more digits, distinct token values, a value
// outside 1..7.
ExtractedScore extract_score(std::string_view text);

// Removes ASCII digits; everything else is kept byte for byte.
std::string strip_text(std::string_view text);

// Number of digit tokens equal to the accepted value (>= 2 means the model
// repeated its rating).
int rating_mentions(std::string_view text);

}  // namespace wlab::scale
