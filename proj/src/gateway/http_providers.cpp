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

#include <chrono>
#include <cstdlib>

#include <httplib.h>

#include "wlab/gateway/providers.hpp"

namespace wlab::gateway {

using nlohmann::json;

namespace {

std::string join(const std::vector<std::string>& parts,
                 const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

std::string error_message(const std::string& body) {
  try {
    auto j = json::parse(body);
    if (j.contains("error")) {
      const auto& e = j["error"];
      if (e.is_object() && e.contains("message")) {
        return e["message"].get<std::string>();
      }
      if (e.is_string()) return e.get<std::string>();
    }
  } catch (const json::exception&) {
  }
  return body.substr(0, 200);
}

}  // namespace

json build_anthropic_body(const CompletionRequest& request) {
  json content = json::array();
  for (const auto& m : request.user_messages) {
    content.push_back({{"type", "text"}, {"text", m}});
  }
  json body = {{"model", request.model_id},
               {"max_tokens", request.max_tokens},
               {"temperature", request.temperature},
               {"messages", json::array({{{"role", "user"},
                                          {"content", content}}})}};
  if (!request.system_messages.empty()) {
    body["system"] = join(request.system_messages, "\n\n");
  }
  return body;
}

json build_openai_body(const CompletionRequest& request) {
  json messages = json::array();
  for (const auto& m : request.system_messages) {
    messages.push_back({{"role", "system"}, {"content", m}});
  }
  messages.push_back(
      {{"role", "user"}, {"content", join(request.user_messages, "\n\n")}});
  return {{"model", request.model_id},
          {"max_tokens", request.max_tokens},
          {"temperature", request.temperature},
          {"messages", messages}};
}

CompletionResponse parse_anthropic_response(const json& body) {
  if (!body.contains("content") || !body["content"].is_array()) {
    throw ProviderError("malformed Anthropic response: no content array");
  }
  CompletionResponse out;
  for (const auto& block : body["content"]) {
    if (block.value("type", "") == "text") {
      out.text += block.value("text", "");
    }
  }
  for (const char* key : {"id", "model", "stop_reason", "usage"}) {
    if (body.contains(key)) out.provider_metadata[key] = body[key];
  }
  return out;
}

CompletionResponse parse_openai_response(const json& body) {
  if (!body.contains("choices") || !body["choices"].is_array() ||
      body["choices"].empty()) {
    throw ProviderError("malformed chat-completions response: no choices");
  }
  CompletionResponse out;
  const auto& message = body["choices"][0].value("message", json::object());
  if (message.contains("content") && message["content"].is_string()) {
    out.text = message["content"].get<std::string>();
  }
  out.provider_metadata["finish_reason"] =
      body["choices"][0].value("finish_reason", "");
  for (const char* key : {"id", "model", "usage"}) {
    if (body.contains(key)) out.provider_metadata[key] = body[key];
  }
  return out;
}

void throw_for_status(int status, const std::string& body) {
  const std::string msg =
      "HTTP " + std::to_string(status) + ": " + error_message(body);
  if (status == 401 || status == 403) throw AuthError(msg);
  if (status == 429) throw RateLimitError(msg);
  if (status == 408 || status == 504) throw TimeoutError(msg);
  // 5xx and Anthropic's 529 "overloaded" are worth retrying.
  throw ProviderError(msg, status >= 500);
}

HttpProvider::HttpProvider(HttpProviderConfig config)
    : config_(std::move(config)) {}

std::string HttpProvider::api_key() const {
  if (config_.api_key_env.empty()) {
    throw AuthError("provider '" + config_.name + "' has no api_key_env");
  }
  const char* key = std::getenv(config_.api_key_env.c_str());
  if (key == nullptr || *key == '\0') {
    throw AuthError("environment variable " + config_.api_key_env +
                    " is not set");
  }
  return key;
}

CompletionResponse HttpProvider::send(const CompletionRequest& request) {
  const std::string key = api_key();

  httplib::Client client(config_.base_url);
  client.set_connection_timeout(std::chrono::seconds(30));
  client.set_read_timeout(std::chrono::seconds(config_.timeout_seconds));
  client.set_write_timeout(std::chrono::seconds(30));

  httplib::Headers headers;
  std::string path;
  json body;
  if (config_.format == WireFormat::Anthropic) {
    headers = {{"x-api-key", key},
               {"anthropic-version", config_.anthropic_version}};
    path = "/v1/messages";
    body = build_anthropic_body(request);
  } else {
    headers = {{"Authorization", "Bearer " + key}};
    path = "/v1/chat/completions";
    body = build_openai_body(request);
  }

  const auto start = std::chrono::steady_clock::now();
  auto res = client.Post(path, headers, body.dump(), "application/json");
  const auto latency = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - start)
                           .count();
  if (!res) {
    const auto err = res.error();
    if (err == httplib::Error::Read || err == httplib::Error::Write ||
        err == httplib::Error::ConnectionTimeout) {
      throw TimeoutError("request timed out: " + httplib::to_string(err));
    }
    throw ProviderError("transport error: " + httplib::to_string(err), true);
  }
  if (res->status < 200 || res->status >= 300) {
    throw_for_status(res->status, res->body);
  }

  json parsed;
  try {
    parsed = json::parse(res->body);
  } catch (const json::exception& e) {
    throw ProviderError(std::string("unparsable response body: ") + e.what());
  }
  CompletionResponse out = config_.format == WireFormat::Anthropic
                               ? parse_anthropic_response(parsed)
                               : parse_openai_response(parsed);
  out.latency_ms = latency;
  out.provider_metadata["temperature"] = request.temperature;
  out.provider_metadata["max_tokens"] = request.max_tokens;
  return out;
}

}  // namespace wlab::gateway
