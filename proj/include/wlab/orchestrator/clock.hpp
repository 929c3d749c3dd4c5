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

#include <chrono>
#include <cstdint>
#include <string>

namespace wlab::orchestrator {

// Session time source. now() is seconds since start(); on_step() is called
// once after every agent step.
class SessionClock {
 public:
  virtual ~SessionClock() = default;
  virtual void start() {}
  virtual double now() const = 0;
  virtual void on_step() {}
  // ISO-8601 UTC timestamp for the current instant.
  virtual std::string timestamp() const = 0;
};

// Advances a fixed amount per agent step; fully deterministic.
class SimulatedClock : public SessionClock {
 public:
  explicit SimulatedClock(double step_seconds = 10.0,
                          std::int64_t epoch_unix_seconds = 1753315200);

  double now() const override { return elapsed_; }
  void on_step() override { elapsed_ += step_; }
  void advance(double seconds) { elapsed_ += seconds; }
  std::string timestamp() const override;

 private:
  double step_;
  double elapsed_ = 0.0;
  std::int64_t epoch_;
};

class WallClock : public SessionClock {
 public:
  void start() override { start_ = std::chrono::steady_clock::now(); }
  double now() const override;
  std::string timestamp() const override;

 private:
  std::chrono::steady_clock::time_point start_ =
      std::chrono::steady_clock::now();
};

// Formats unix milliseconds as 2025-07-24T00:00:10.000Z.
std::string format_iso8601(std::int64_t unix_millis);
std::string now_iso8601();

}  // namespace wlab::orchestrator
