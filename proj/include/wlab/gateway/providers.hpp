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

#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "wlab/gateway/gateway.hpp"

namespace wlab::gateway {

// Deterministic stand-in for a model API. Replies come from a responder
// function when set, otherwise from a FIFO queue; an exhausted queue repeats
// the fallback text. Failures can be planted to exercise retry paths.
class ScriptedProvider : public Provider {
 public:
  using Responder = std::function<std::string(const CompletionRequest&)>;

  ScriptedProvider() = default;
  explicit ScriptedProvider(std::vector<std::string> queue,
                            std::string fallback = {});
  explicit ScriptedProvider(Responder responder);

  std::string name() const override { return "scripted"; }
  CompletionResponse send(const CompletionRequest& request) override;

  void push(std::string reply);
  // The next `count` calls throw a copy of `error` instead of replying.
  void fail_next(int count, std::function<void()> thrower);
  // Call number `call_index` (0-based, counting every send) throws.
  void fail_on_call(std::size_t call_index, std::function<void()> thrower);

  std::size_t calls() const;
  std::vector<CompletionRequest> requests() const;

 private:
  mutable std::mutex mu_;
  std::deque<std::string> queue_;
  std::string fallback_;
  Responder responder_;
  std::deque<std::function<void()>> pending_failures_;
  std::vector<std::pair<std::size_t, std::function<void()>>> planned_;
  std::vector<CompletionRequest> log_;
};

enum class WireFormat { Anthropic, OpenAI };

struct HttpProviderConfig {
  std::string name;
  WireFormat format = WireFormat::Anthropic;
  std::string base_url;     // e.g. https://api.anthropic.com
  std::string api_key_env;  // variable holding the key; never serialized
  std::string anthropic_version = "2023-06-01";
  int timeout_seconds = 120;
};

// Wire-format helpers, exposed for tests.
nlohmann::json build_anthropic_body(const CompletionRequest& request);
nlohmann::json build_openai_body(const CompletionRequest& request);
CompletionResponse parse_anthropic_response(const nlohmann::json& body);
CompletionResponse parse_openai_response(const nlohmann::json& body);
// Maps an HTTP status plus body to the matching GatewayError and throws.
[[noreturn]] void throw_for_status(int status, const std::string& body);

class HttpProvider : public Provider {
 public:
  explicit HttpProvider(HttpProviderConfig config);

  std::string name() const override { return config_.name; }
  CompletionResponse send(const CompletionRequest& request) override;

 private:
  std::string api_key() const;

  HttpProviderConfig config_;
};

}  // namespace wlab::gateway
