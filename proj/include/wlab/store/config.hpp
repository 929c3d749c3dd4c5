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

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include <json.hpp>

#include "wlab/env/types.hpp"
#include "wlab/gateway/gateway.hpp"
#include "wlab/gateway/providers.hpp"

namespace wlab::store {

struct ProviderEntry {
  gateway::HttpProviderConfig http;
  double requests_per_second = 0.0;  // 0 disables the limiter
  double burst = 1.0;
};

struct ModelEntry {
  std::string provider;      // key into AppConfig::providers
  std::string api_model;     // identifier sent on the wire
  std::string display_name;  // substituted into the cats system prompt
};

// Everything the CLI needs that is not a per-invocation flag. Paths are
// resolved relative to the config file's directory.
struct AppConfig {
  std::map<std::string, ProviderEntry> providers;
  std::map<std::string, ModelEntry> models;
  std::map<env::EconomyKind, env::EconomicCondition> conditions;
  std::filesystem::path item_bank;
  std::filesystem::path letters;
  nlohmann::json prompts = nlohmann::json::object();  // session prompt overrides
  std::string analyzer_model;
  std::string keyword_template;
  gateway::RetryPolicy retry;

  // Built-in defaults: Anthropic and OpenAI providers, packaged data files,
  // and the standard tariffs.
  static AppConfig defaults();

  env::EconomicCondition condition(env::EconomyKind kind) const;
  // Model entry for an id, or a synthesized one using the default provider.
  ModelEntry model(const std::string& model_id) const;
};

// Overlays the file's keys on defaults(). Throws env::ConfigError on bad
// values. Any "api_key" field is rejected: keys come from the environment.
AppConfig load_config(const std::filesystem::path& path);
AppConfig config_from_json(const nlohmann::json& j,
                           const std::filesystem::path& base_dir);

// Packaged data directory (compiled-in, overridable with WLAB_DATA).
std::filesystem::path data_dir();

// Gateway for a configured model: HTTP provider + rate limiter + retry.
std::unique_ptr<gateway::Gateway> make_gateway(const AppConfig& config,
                                               const std::string& model_id);

env::EnvironmentConfig load_letters(const std::filesystem::path& path);

}  // namespace wlab::store
