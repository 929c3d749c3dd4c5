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

#include "wlab/control/event_journal.hpp"

#include <algorithm>

namespace wlab::control {

void EventJournal::append(const env::Event& e) {
  {
    std::lock_guard lock(mu_);
    if (!events_.empty() && e.seq <= events_.back().seq) return;  // duplicate
    events_.push_back(e);
  }
  cv_.notify_all();
}

void EventJournal::close(std::string final_status) {
  {
    std::lock_guard lock(mu_);
    closed_ = true;
    final_status_ = std::move(final_status);
  }
  cv_.notify_all();
}

std::vector<env::Event> EventJournal::after(std::uint64_t after_seq,
                                            std::size_t limit) const {
  std::lock_guard lock(mu_);
  auto it = std::upper_bound(
      events_.begin(), events_.end(), after_seq,
      [](std::uint64_t s, const env::Event& e) { return s < e.seq; });
  std::vector<env::Event> out(it, events_.end());
  if (limit > 0 && out.size() > limit) out.resize(limit);
  return out;
}

std::vector<env::Event> EventJournal::tail(std::size_t n) const {
  std::lock_guard lock(mu_);
  const std::size_t start = events_.size() > n ? events_.size() - n : 0;
  return {events_.begin() + static_cast<std::ptrdiff_t>(start), events_.end()};
}

bool EventJournal::wait_after(std::uint64_t after_seq,
                              std::chrono::milliseconds timeout) const {
  std::unique_lock lock(mu_);
  auto ready = [&] {
    return (!events_.empty() && events_.back().seq > after_seq) || closed_;
  };
  cv_.wait_for(lock, timeout, ready);
  return !events_.empty() && events_.back().seq > after_seq;
}

bool EventJournal::closed() const {
  std::lock_guard lock(mu_);
  return closed_;
}

std::optional<std::string> EventJournal::final_status() const {
  std::lock_guard lock(mu_);
  return final_status_;
}

std::uint64_t EventJournal::last_seq() const {
  std::lock_guard lock(mu_);
  return events_.empty() ? 0 : events_.back().seq;
}

std::size_t EventJournal::size() const {
  std::lock_guard lock(mu_);
  return events_.size();
}

}  // namespace wlab::control
