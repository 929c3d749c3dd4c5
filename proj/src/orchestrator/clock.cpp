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

#include "wlab/orchestrator/clock.hpp"

#include <cmath>
#include <cstdio>
#include <ctime>

namespace wlab::orchestrator {

std::string format_iso8601(std::int64_t unix_millis) {
  const std::time_t secs = static_cast<std::time_t>(
      unix_millis >= 0 ? unix_millis / 1000 : (unix_millis - 999) / 1000);
  const int millis = static_cast<int>(unix_millis - secs * 1000LL);
  std::tm tm{};
  gmtime_r(&secs, &tm);
  char buf[96];  // roomy enough for any int fields
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ",
                tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday, tm.tm_hour,
                tm.tm_min, tm.tm_sec, millis);
  return buf;
}

std::string now_iso8601() {
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::system_clock::now().time_since_epoch())
                      .count();
  return format_iso8601(ms);
}

SimulatedClock::SimulatedClock(double step_seconds,
                               std::int64_t epoch_unix_seconds)
    : step_(step_seconds), epoch_(epoch_unix_seconds) {}

std::string SimulatedClock::timestamp() const {
  return format_iso8601(epoch_ * 1000 +
                        static_cast<std::int64_t>(std::llround(elapsed_ * 1000)));
}

double WallClock::now() const {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start_)
      .count();
}

std::string WallClock::timestamp() const { return now_iso8601(); }

}  // namespace wlab::orchestrator
