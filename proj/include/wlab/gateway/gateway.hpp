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
#include <functional>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "wlab/gateway/rate_limiter.hpp"

namespace wlab::gateway {

// What the caller is asking for. Providers ignore it; scripted providers use
// it to pick a reply without parsing prompt text.
enum class Purpose {
  Generic,
  Tour,
  Action,
  Reply,
  Diary,
  Baseline,
  KeywordExtraction,
  ScaleItem,
};

std::string to_string(Purpose p);

struct CompletionRequest {
  std::string model_id;
  std::vector<std::string> system_messages;
  std::vector<std::string> user_messages;
  double temperature = 1.0;
  int max_tokens = 1024;
  Purpose purpose = Purpose::Generic;
};

struct CompletionResponse {
  std::string text;  // may be empty; empty replies are valid
  nlohmann::json provider_metadata = nlohmann::json::object();
  std::int64_t latency_ms = 0;
};

class GatewayError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual bool transient() const { return false; }
};

class AuthError : public GatewayError {
 public:
  using GatewayError::GatewayError;
};

class RateLimitError : public GatewayError {
 public:
  using GatewayError::GatewayError;
  bool transient() const override { return true; }
};

class TimeoutError : public GatewayError {
 public:
  using GatewayError::GatewayError;
  bool transient() const override { return true; }
};

class ProviderError : public GatewayError {
 public:
  ProviderError(const std::string& what, bool transient = false)
      : GatewayError(what), transient_(transient) {}
  bool transient() const override { return transient_; }

 private:
  bool transient_;
};

// One attempt against one backend. Throws GatewayError subclasses.
class Provider {
 public:
  virtual ~Provider() = default;
  virtual std::string name() const = 0;
  virtual CompletionResponse send(const CompletionRequest& request) = 0;
};

struct RetryPolicy {
  int max_attempts = 3;
  std::chrono::milliseconds base_delay{500};
  double factor = 2.0;
  std::chrono::milliseconds max_delay{30000};

  // Delay before attempt `attempt + 1`, for attempt >= 1.
  std::chrono::milliseconds delay_after(int attempt) const;
};

struct RetryEvent {
  int attempt = 0;
  std::chrono::milliseconds delay{0};
  std::string error;
};

using Sleeper = std::function<void(std::chrono::milliseconds)>;

// Retrying, rate-limited front for a provider. Safe for concurrent calls.
class Gateway {
 public:
  explicit Gateway(std::shared_ptr<Provider> provider, RetryPolicy retry = {},
                   std::shared_ptr<RateLimiter> limiter = nullptr);

  CompletionResponse complete(const CompletionRequest& request);

  void set_sleeper(Sleeper sleeper);
  void set_retry_observer(std::function<void(const RetryEvent&)> observer);

  const RetryPolicy& retry_policy() const { return retry_; }
  std::vector<RetryEvent> retry_events() const;
  std::string provider_name() const { return provider_->name(); }

 private:
  std::shared_ptr<Provider> provider_;
  RetryPolicy retry_;
  std::shared_ptr<RateLimiter> limiter_;
  Sleeper sleep_;
  std::function<void(const RetryEvent&)> observer_;
  mutable std::mutex mu_;
  std::vector<RetryEvent> retries_;
};

}  // namespace wlab::gateway
