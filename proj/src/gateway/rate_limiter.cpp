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

#include "wlab/gateway/rate_limiter.hpp"

#include <algorithm>
#include <stdexcept>
#include <thread>

namespace wlab::gateway {

RateLimiter::RateLimiter(double tokens_per_second, double burst)
    : rate_(tokens_per_second),
      burst_(burst),
      tokens_(burst),
      last_(Clock::now()) {
  if (rate_ <= 0 || burst_ < 1) {
    throw std::invalid_argument("rate limiter needs rate > 0 and burst >= 1");
  }
}

void RateLimiter::refill(Clock::time_point now) {
  const std::chrono::duration<double> elapsed = now - last_;
  tokens_ = std::min(burst_, tokens_ + elapsed.count() * rate_);
  last_ = now;
}

bool RateLimiter::try_acquire() {
  std::lock_guard lock(mu_);
  refill(Clock::now());
  if (tokens_ >= 1.0) {
    tokens_ -= 1.0;
    return true;
  }
  return false;
}

void RateLimiter::acquire() {
  for (;;) {
    std::chrono::duration<double> wait{};
    {
      std::lock_guard lock(mu_);
      refill(Clock::now());
      if (tokens_ >= 1.0) {
        tokens_ -= 1.0;
        return;
      }
      wait = std::chrono::duration<double>((1.0 - tokens_) / rate_);
    }
    std::this_thread::sleep_for(wait);
  }
}

double RateLimiter::available() {
  std::lock_guard lock(mu_);
  refill(Clock::now());
  return tokens_;
}

}  // namespace wlab::gateway
