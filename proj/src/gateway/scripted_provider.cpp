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

#include "wlab/gateway/providers.hpp"

namespace wlab::gateway {

ScriptedProvider::ScriptedProvider(std::vector<std::string> queue,
                                   std::string fallback)
    : queue_(queue.begin(), queue.end()), fallback_(std::move(fallback)) {}

ScriptedProvider::ScriptedProvider(Responder responder)
    : responder_(std::move(responder)) {}

void ScriptedProvider::push(std::string reply) {
  std::lock_guard lock(mu_);
  queue_.push_back(std::move(reply));
}

void ScriptedProvider::fail_next(int count, std::function<void()> thrower) {
  std::lock_guard lock(mu_);
  for (int i = 0; i < count; ++i) pending_failures_.push_back(thrower);
}

void ScriptedProvider::fail_on_call(std::size_t call_index,
                                    std::function<void()> thrower) {
  std::lock_guard lock(mu_);
  planned_.emplace_back(call_index, std::move(thrower));
}

std::size_t ScriptedProvider::calls() const {
  std::lock_guard lock(mu_);
  return log_.size();
}

std::vector<CompletionRequest> ScriptedProvider::requests() const {
  std::lock_guard lock(mu_);
  return log_;
}

CompletionResponse ScriptedProvider::send(const CompletionRequest& request) {
  std::function<void()> failure;
  Responder responder;
  std::string text;
  {
    std::lock_guard lock(mu_);
    const std::size_t index = log_.size();
    log_.push_back(request);
    for (auto it = planned_.begin(); it != planned_.end(); ++it) {
      if (it->first == index) {
        failure = it->second;
        planned_.erase(it);
        break;
      }
    }
    if (!failure && !pending_failures_.empty()) {
      failure = std::move(pending_failures_.front());
      pending_failures_.pop_front();
    }
    if (!failure) {
      if (responder_) {
        responder = responder_;
      } else if (!queue_.empty()) {
        text = std::move(queue_.front());
        queue_.pop_front();
      } else {
        text = fallback_;
      }
    }
  }
  if (failure) failure();
  if (responder) text = responder(request);

  CompletionResponse response;
  response.text = std::move(text);
  response.provider_metadata = {{"model", request.model_id},
                                {"scripted", true},
                                {"purpose", to_string(request.purpose)}};
  response.latency_ms = 0;
  return response;
}

}  // namespace wlab::gateway
