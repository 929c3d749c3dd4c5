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

#include "wlab/gateway/gateway.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace wlab::gateway {

std::chrono::milliseconds RetryPolicy::delay_after(int attempt) const {
  const double scaled =
      static_cast<double>(base_delay.count()) * std::pow(factor, attempt - 1);
  const double capped = std::min(scaled, static_cast<double>(max_delay.count()));
  return std::chrono::milliseconds(static_cast<std::int64_t>(capped));
}

Gateway::Gateway(std::shared_ptr<Provider> provider, RetryPolicy retry,
                 std::shared_ptr<RateLimiter> limiter)
    : provider_(std::move(provider)),
      retry_(retry),
      limiter_(std::move(limiter)),
      sleep_([](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); }) {
  if (!provider_) throw std::invalid_argument("gateway needs a provider");
  if (retry_.max_attempts < 1) retry_.max_attempts = 1;
}

void Gateway::set_sleeper(Sleeper sleeper) { sleep_ = std::move(sleeper); }

void Gateway::set_retry_observer(
    std::function<void(const RetryEvent&)> observer) {
  observer_ = std::move(observer);
}

std::vector<RetryEvent> Gateway::retry_events() const {
  std::lock_guard lock(mu_);
  return retries_;
}

CompletionResponse Gateway::complete(const CompletionRequest& request) {
  if (request.temperature < 0.0) {
    throw std::invalid_argument("temperature must be >= 0");
  }
  std::string last_error;
  for (int attempt = 1; attempt <= retry_.max_attempts; ++attempt) {
    if (limiter_) limiter_->acquire();
    try {
      const auto start = std::chrono::steady_clock::now();
      CompletionResponse response = provider_->send(request);
      if (response.latency_ms == 0) {
        response.latency_ms =
            std::chrono::duration_cast<std::chrono::milliseconds>(
                std::chrono::steady_clock::now() - start)
                .count();
      }
      response.provider_metadata["attempts"] = attempt;
      response.provider_metadata["provider"] = provider_->name();
      return response;
    } catch (const GatewayError& e) {
      if (!e.transient()) throw;
      last_error = e.what();
      if (attempt == retry_.max_attempts) break;
      RetryEvent ev{attempt, retry_.delay_after(attempt), last_error};
      {
        std::lock_guard lock(mu_);
        retries_.push_back(ev);
      }
      if (observer_) observer_(ev);
      sleep_(ev.delay);
    }
  }
  throw ProviderError("gave up after " + std::to_string(retry_.max_attempts) +
                      " attempts: " + last_error);
}

}  // namespace wlab::gateway
