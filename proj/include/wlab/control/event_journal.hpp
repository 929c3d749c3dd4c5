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
#include <condition_variable>
#include <cstdint>
#include <mutex>
#include <optional>
#include <vector>

#include "wlab/env/types.hpp"

namespace wlab::control {

// Append-only copy of a session's events for concurrent readers. Sequence
// numbers come from the session and are strictly increasing.
class EventJournal {
 public:
  void append(const env::Event& e);
  // Marks the stream complete; waiters wake up.
  void close(std::string final_status);

  // Events with seq > after_seq, at most `limit` of them (0 = all).
  std::vector<env::Event> after(std::uint64_t after_seq, std::size_t limit = 0) const;
  std::vector<env::Event> tail(std::size_t n) const;

  // Blocks until an event with seq > after_seq exists, the journal closes,
  // or the timeout passes. Returns true when new events are available.
  bool wait_after(std::uint64_t after_seq, std::chrono::milliseconds timeout) const;

  bool closed() const;
  std::optional<std::string> final_status() const;
  std::uint64_t last_seq() const;
  std::size_t size() const;

 private:
  mutable std::mutex mu_;
  mutable std::condition_variable cv_;
  std::vector<env::Event> events_;
  bool closed_ = false;
  std::optional<std::string> final_status_;
};

}  // namespace wlab::control
